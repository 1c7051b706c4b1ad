"""Text and LaTeX rendering of polynomials in canonical term order."""

from __future__ import annotations


def _factors(exps, fmt):
    # lengths first, then pi, then the rest by id
    order = sorted(exps, key=lambda s: (s.kind != "B", s.kind != "Q", s.id))
    return [fmt(s, exps[s]) for s in order]


def text(p) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for exps, c in p.terms():
        mono = "*".join(_factors(exps, lambda s, e: s.text(e)))
        mag = abs(c)
        num, den = mag.numerator, mag.denominator
        if not mono:
            body = f"{num}" if den == 1 else f"{num}/{den}"
        elif den == 1:
            body = mono if num == 1 else f"{num}*{mono}"
        else:
            body = f"{mono}/{den}" if num == 1 else f"{num}*{mono}/{den}"
        parts.append(("-" if c < 0 else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def latex(p) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for exps, c in p.terms():
        mono = " ".join(_factors(exps, lambda s, e: s.latex(e)))
        mag = abs(c)
        num, den = mag.numerator, mag.denominator
        if not mono:
            body = f"{num}" if den == 1 else f"\\frac{{{num}}}{{{den}}}"
        elif den == 1:
            body = mono if num == 1 else f"{num} {mono}"
        else:
            top = mono if num == 1 else f"{num} {mono}"
            body = f"\\frac{{{top}}}{{{den}}}"
        parts.append(("-" if c < 0 else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
