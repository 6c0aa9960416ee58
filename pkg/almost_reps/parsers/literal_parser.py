"""
Element Literal Parser
Parses signed sums of coefficient * monomial terms, e.g. "1 + 2*t - t^-1", "a*b^-1*a", "E[3,7]"
"""

import re

from almost_reps.utils.errors import SpecError

TOKEN = re.compile(r"""
    \s*(?:
      (?P<unit>E\[\s*(?P<row>\d+)\s*,\s*(?P<col>\d+)\s*\])
    | (?P<number>\d+(?:/\d+)?)
    | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<power>\^\s*(?P<exp>[+-]?\d+))
    | (?P<op>[*+-])
    )""", re.VERBOSE)


class ElementParser:
    """Parser for element literals over a fixed carrier"""

    def __init__(self, carrier):
        """
        Initialize parser

        Args:
            carrier: Carrier the literals denote elements of
        """
        self.carrier = carrier

    def tokenize(self, text):
        tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            match = TOKEN.match(text, pos)
            if not match or match.end() == pos:
                raise SpecError(f"Unexpected character {text[pos]!r} at {pos} in {text!r}")
            pos = match.end()
            if match.group("unit"):
                tokens.append(("unit", (int(match.group("row")), int(match.group("col")))))
            elif match.group("number"):
                tokens.append(("number", match.group("number")))
            elif match.group("name"):
                tokens.append(("name", match.group("name")))
            elif match.group("power"):
                tokens.append(("power", int(match.group("exp"))))
            else:
                tokens.append(("op", match.group("op")))
        return tokens

    def parse(self, text):
        """
        Parse an element literal

        Args:
            text: Literal string; an int or a list of literals is also accepted
                (a list denotes the sum of its items)

        Returns:
            AlgebraElement
        """
        if isinstance(text, (list, tuple)):
            out = self.carrier.zero()
            for item in text:
                out = out + self.parse(item)
            return out
        if isinstance(text, int):
            text = str(text)
        if not isinstance(text, str) or not text.strip():
            raise SpecError(f"Empty or invalid element literal: {text!r}")
        tokens = self.tokenize(text)
        pos = 0
        total = self.carrier.zero()
        while pos < len(tokens):
            sign = 1
            signed = False
            while pos < len(tokens) and tokens[pos] in (("op", "+"), ("op", "-")):
                if tokens[pos][1] == "-":
                    sign = -sign
                signed = True
                pos += 1
            if pos and not signed:
                raise SpecError(f"Missing '+' or '-' between terms in {text!r}")
            term, pos = self._term(tokens, pos, text)
            total = total + (term if sign > 0 else -term)
        return total

    def _term(self, tokens, pos, text):
        carrier = self.carrier
        element = carrier.one()
        expect_factor = True
        while pos < len(tokens):
            kind, value = tokens[pos]
            if not expect_factor:
                if (kind, value) == ("op", "*"):
                    expect_factor = True
                    pos += 1
                    continue
                break
            if kind == "number":
                factor = carrier.one().scale(carrier.field.parse(value))
            elif kind == "name":
                power = 1
                if pos + 1 < len(tokens) and tokens[pos + 1][0] == "power":
                    power = tokens[pos + 1][1]
                    pos += 1
                factor = carrier.basis_element(carrier.letter(value, power))
            elif kind == "unit":
                factor = carrier.basis_element(carrier.matrix_unit(*value))
            else:
                raise SpecError(f"Unexpected {value!r} in {text!r}")
            element = carrier.mul(element, factor)
            expect_factor = False
            pos += 1
        if expect_factor:
            raise SpecError(f"Dangling operator in {text!r}")
        return element, pos

    def parse_matrix(self, rows):
        """Nested lists of literals -> nested lists of AlgebraElement"""
        if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
            raise SpecError(f"Matrix literal must be a non-empty list of rows: {rows!r}")
        return [[self.parse(x) for x in row] for row in rows]
