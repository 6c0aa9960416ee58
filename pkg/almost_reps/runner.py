"""Main runner class for almost representation experiments"""

import time
from fractions import Fraction

import numpy as np

from almost_reps.algebra.folner import (
    ExhaustionSpec, default_exhaustion, exhaustion_subspace, folner_scan, scan_frame, span,
)
from almost_reps.analysis.almostrep import (
    AlmostRep, amplify, build_from_folner, folner_defect_bound, tensor, verify,
)
from almost_reps.analysis.pathology import (
    commutator_bound_check, finite_stable_check, random_matrix_over, random_near_inverse_pair, random_square,
    rank_condition_audit, stable_finiteness_audit, witness_subspace,
)
from almost_reps.analysis.rankradical import rr_estimate, rr_monotonicity_report
from almost_reps.graphs.graphlab import gen_graph, non_ibn_witness, paradoxical_pair, verify_pair
from almost_reps.linalg.exactlin import rank
from almost_reps.linalg.field import format_ratio, make_field
from almost_reps.parsers.algebra_spec import AlgebraSpecParser
from almost_reps.parsers.literal_parser import ElementParser
from almost_reps.utils.console import Console
from almost_reps.utils.errors import InvariantError, SpecError
from almost_reps.utils.report_writer import load_json, save_json


class AlmostRepRunner:
    """Runs one configured command and produces its report records"""

    def __init__(self, config, console=None):
        """
        Initialize the runner

        Args:
            config: Validated RunConfig
            console: Console for status output
        """
        self.config = config
        self.console = console or Console()
        self.field = make_field(config.get("field"))
        self.rng = np.random.default_rng(config.get("seed", default=0))

    # -- setup --------------------------------------------------------------

    def carrier(self, key="algebra"):
        source = self.config.get(key)
        if isinstance(source, str):
            source = str(self.config.resolve_path(source))
        if isinstance(source, dict) and isinstance(source.get("graph"), str):
            source = dict(source, graph=str(self.config.resolve_path(source["graph"])))
        return AlgebraSpecParser(source, field=self.config.get("field")).parse()

    def graph(self):
        spec = self.config.get("graph", default=None)
        if spec is None:
            raise SpecError("This command needs a graph (generator spec or file path)")
        if isinstance(spec, str):
            spec = {"type": "file", "path": str(self.config.resolve_path(spec))}
        elif spec.get("type") == "file" and "path" in spec:
            spec = dict(spec, path=str(self.config.resolve_path(spec["path"])))
        return gen_graph(spec)

    def exhaustion(self, carrier):
        spec = self.config.get("exhaustion", default=None)
        return ExhaustionSpec.from_dict(spec) if spec is not None else default_exhaustion(carrier)

    def subspace(self, carrier, key, extra=()):
        """Span of the configured literals, or of the generator ball, plus extra elements"""
        literals = self.config.get(key, default=None)
        parser = ElementParser(carrier)
        if literals is None:
            gens = carrier.generator_ball()
        else:
            if not isinstance(literals, list):
                raise SpecError(f"{key} must be a list of element literals")
            gens = [carrier.one()] + [parser.parse(x) for x in literals]
        return span(carrier, list(gens) + list(extra))

    def q_subspace(self, carrier, n=None):
        literals = self.config.get("Q", default=None)
        if literals is not None:
            parser = ElementParser(carrier)
            return span(carrier, [parser.parse(x) for x in literals])
        return exhaustion_subspace(carrier, self.exhaustion(carrier), n or self.config.get("n"))

    def build_rep(self, carrier, L=None):
        L = L if L is not None else self.subspace(carrier, "L")
        Q = self.q_subspace(carrier)
        self.console.info(f"Building almost representation: dim L = {L.dim}, dim Q = {Q.dim}")
        return build_from_folner(L, Q)

    def record(self, body, passed, started):
        out = dict(body)
        out.update(
            command=self.config.command,
            params=self.config.params(),
            wall_time_us=(time.perf_counter_ns() - started) // 1000,
        )
        out["pass"] = bool(passed)
        return out

    # -- commands -------------------------------------------------------------

    def run_folner_scan(self):
        started = time.perf_counter_ns()
        carrier = self.carrier()
        B = self.subspace(carrier, "B")
        exhaustion = self.exhaustion(carrier)
        self.console.info(f"Følner scan on {carrier!r} with dim B = {B.dim}, exhaustion {exhaustion.type}")
        certificates = folner_scan(carrier, B, exhaustion, self.config.get("n_max"))
        records = []
        previous = 0
        for cert in certificates:
            ok = cert.ratio >= 0 and cert.dim_Q >= previous
            previous = cert.dim_Q
            body = dict(cert.to_dict(), exhaustion=exhaustion.to_dict())
            records.append(self.record(body, ok, started))
            started = time.perf_counter_ns()
        self.console.table(scan_frame(certificates))
        return records

    def _rep_body(self, rep, report):
        return {
            "l_dim": rep.l_dim,
            "v_dim": rep.v_dim,
            "core_dim": rep.core_dim,
            "defect": format_ratio(rep.defect),
            "table_size": len(rep.table),
            "verification": report.to_dict(),
        }

    def run_almostrep_build(self):
        started = time.perf_counter_ns()
        carrier = self.carrier()
        rep = self.build_rep(carrier)
        report = verify(rep)
        bound = folner_defect_bound(rep.build)
        body = self._rep_body(rep, report)
        body["defect_bound"] = format_ratio(bound)
        body["folner_ratio"] = format_ratio(Fraction(rep.build.ambient.dim - rep.v_dim, rep.v_dim))
        passed = report.passed and rep.defect <= bound
        if self.config.get("rep_output", default=None):
            save_json(rep.to_dict(), self.config.get("rep_output"))
            self.console.ok(f"Almost representation saved to {self.config.get('rep_output')}")
        self.console.ok(f"V dim {rep.v_dim}, core dim {rep.core_dim}, defect {format_ratio(rep.defect)}")
        return [self.record(body, passed, started)]

    def run_amplify(self):
        started = time.perf_counter_ns()
        carrier = self.carrier()
        rep = self.build_rep(carrier)
        n = self.config.get("amplify_n")
        amp = amplify(rep, n)
        report = verify(amp)
        body = self._rep_body(amp, report)
        body.update(amplify_n=n, base_v_dim=rep.v_dim, base_core_dim=rep.core_dim,
                    base_defect=format_ratio(rep.defect))
        passed = (report.passed and amp.v_dim == n * rep.v_dim and amp.core_dim >= n * rep.core_dim
                  and amp.defect <= rep.defect)
        return [self.record(body, passed, started)]

    def run_tensor(self):
        started = time.perf_counter_ns()
        rep_a = self.build_rep(self.carrier())
        rep_b = self.build_rep(self.carrier("algebra_b"))
        rep = tensor(rep_a, rep_b)
        report = verify(rep)
        floor = (1 - rep_a.defect) * (1 - rep_b.defect)
        body = self._rep_body(rep, report)
        body.update(defect_a=format_ratio(rep_a.defect), defect_b=format_ratio(rep_b.defect),
                    core_ratio_floor=format_ratio(floor))
        passed = report.passed and 1 - rep.defect >= floor
        return [self.record(body, passed, started)]

    def run_paradox(self):
        g = self.graph()
        ks = self.config.get("K_scan", default=None) or [self.config.get("K")]
        shells = self.config.get("boundary_shells")
        records = []
        for K in ks:
            started = time.perf_counter_ns()
            self.console.info(f"Paradoxical pair on {g.spec} with K = {K}")
            pair = paradoxical_pair(g, int(K), shells)
            body = pair.to_dict()
            for key in ("V1", "V2", "phi1", "phi2", "A", "B"):
                body.pop(key)
            passed = True
            if pair.success:
                report = verify_pair(pair, self.field)
                body["identities"] = report.to_dict()
                try:
                    witness = non_ibn_witness(pair, self.field)
                    body["witness"] = witness.to_dict()
                    passed = report.passed and witness.passed
                except InvariantError as e:
                    self.console.error(str(e))
                    passed = False
                self.console.ok(f"Pair found: deficiency {pair.deficiency}, domain {len(pair.domain)}")
            else:
                self.console.warning(f"No doubling: deficiency {pair.deficiency} "
                                     f"({format_ratio(pair.normalized_deficiency)} of the interior)")
            output = self.config.get("pair_output", default=None)
            if output:
                save_json(pair.to_dict(), output if len(ks) == 1 else f"{output}.K{K}.json")
            records.append(self.record(body, passed, started))
        return records

    def _matrices(self, carrier):
        parser = ElementParser(carrier)
        A = self.config.get("A", default=None)
        B = self.config.get("B_matrix", default=None)
        if (A is None) != (B is None):
            raise SpecError("Give both A and B_matrix, or neither")
        if A is None:
            return None, None
        return parser.parse_matrix(A), parser.parse_matrix(B)

    def run_audit_rank(self):
        carrier = self.carrier()
        A, B = self._matrices(carrier)
        records = []
        if A is not None:
            started = time.perf_counter_ns()
            L = self.subspace(carrier, "L", extra=witness_subspace(carrier, A, B).basis)
            rep = self.build_rep(carrier, L)
            audit = rank_condition_audit(rep, A, B)
            records.append(self.record(dict(trial=0, **audit.to_dict()), audit.passed, started))
            return records
        rep = self.build_rep(carrier)
        m, n = self.config.get("m", default=2), self.config.get("n_cols", default=1)
        for trial in range(self.config.get("trials")):
            started = time.perf_counter_ns()
            A = random_matrix_over(rep.L, m, n, self.rng)
            B = random_matrix_over(rep.L, n, m, self.rng)
            audit = rank_condition_audit(rep, A, B)
            records.append(self.record(dict(trial=trial, **audit.to_dict()), audit.passed, started))
        failed = sum(not r["pass"] for r in records)
        self.console.info(f"{len(records)} audits, {failed} failed")
        return records

    def run_commutator_check(self):
        records = []
        low, high = self.config.get("sizes")
        for trial in range(self.config.get("trials")):
            started = time.perf_counter_ns()
            size = int(self.rng.integers(low, high + 1))
            T = random_square(self.field, size, self.rng)
            S = random_square(self.field, size, self.rng)
            report = commutator_bound_check(T, S)
            stable = finite_stable_check(T, S)
            body = dict(trial=trial, kind="random", **report.to_dict())
            body["stable_finiteness"] = stable.to_dict()
            records.append(self.record(body, report.passed and stable.implication_ok, started))

            started = time.perf_counter_ns()
            width = min(self.config.get("perturbation_rank"), size)
            T, S = random_near_inverse_pair(self.field, size, self.rng, width)
            report = commutator_bound_check(T, S)
            body = dict(trial=trial, kind="near-inverse", perturbation_rank=width, **report.to_dict())
            records.append(self.record(body, report.passed, started))

        carrier = self.carrier()
        p, a = self.config.get("p", default=None), self.config.get("a", default=None)
        if p is not None and a is not None:
            started = time.perf_counter_ns()
            parser = ElementParser(carrier)
            T_elem, S_elem = parser.parse(p), parser.parse(a)
            rep = self.build_rep(carrier, self.subspace(carrier, "L", extra=[T_elem, S_elem]))
            report = commutator_bound_check(rep.image_of(T_elem), rep.image_of(S_elem))
            body = dict(kind="structured", T=p, S=a, **report.to_dict())
            records.append(self.record(body, report.passed, started))

        A, B = self._matrices(carrier)
        if A is not None:
            started = time.perf_counter_ns()
            extra = witness_subspace(carrier, A, B, include_reverse=True).basis
            rep = self.build_rep(carrier, self.subspace(carrier, "L", extra=extra))
            audit = stable_finiteness_audit(rep, A, B)
            records.append(self.record(dict(kind="stable-finiteness", **audit.to_dict()), audit.passed, started))
        failed = sum(not r["pass"] for r in records)
        self.console.info(f"{len(records)} commutator checks, {failed} failed")
        return records

    def run_rr_estimate(self):
        carrier = self.carrier()
        parser = ElementParser(carrier)
        literal = self.config.get("p", default=None)
        if literal is None:
            raise SpecError("rr-estimate needs an element p")
        p = parser.parse(literal)
        exhaustion = self.exhaustion(carrier)
        n_max = self.config.get("n_max")
        L = self.subspace(carrier, "L", extra=[p])
        series = rr_estimate(carrier, p, L, exhaustion, n_max)

        monotonicity = None
        a_literal = self.config.get("a", default=None)
        if a_literal is not None:
            a = parser.parse(a_literal)
            ap = carrier.mul(a, p)
            L_ap = self.subspace(carrier, "L", extra=[p, a, ap])
            series_ap = rr_estimate(carrier, ap, L_ap, exhaustion, n_max)
            monotonicity = rr_monotonicity_report(series, series_ap, a)

        delta = self.config.get("delta", default=None)
        records = []
        for i, rec in enumerate(series.records):
            started = time.perf_counter_ns()
            body = dict(p=str(p), **rec.to_dict())
            ok = 0 <= rec.ratio <= 1
            if monotonicity is not None:
                n, check = monotonicity.checks[i]
                body["ideal_bound"] = check.to_dict()
                ok = ok and check.passed
            records.append(self.record(body, ok, started))
        if delta is not None:
            hit = series.drops_below(Fraction(str(delta)))
            self.console.info(f"Series drops below {delta}: {'never' if hit is None else f'at n = {hit}'}")
        self.console.table(series.to_frame())
        return records

    def run_verify(self):
        started = time.perf_counter_ns()
        path = self.config.resolve_path(self.config.get("rep"))
        rep = AlmostRep.from_dict(load_json(path))
        report = verify(rep)
        body = self._rep_body(rep, report)
        body["source"] = str(path)
        body["images_rank"] = [rank(m) for m in rep.images]
        return [self.record(body, report.passed, started)]

    def run(self):
        """
        Dispatch the configured command

        Returns:
            list of report records
        """
        handler = getattr(self, "run_" + self.config.command.replace("-", "_"))
        self.console.section(f"ALMOST REPS: {self.config.command}")
        return handler()
