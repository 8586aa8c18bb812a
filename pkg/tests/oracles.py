"""Shared test helpers: an independent normal-ordering oracle and builders.

The swap oracle rewrites words over {q, p} one adjacent pair at a time,
knowing nothing about the closed-form expansion the package uses.  Tests
compare the two so a bug in the combinatorics cannot hide behind itself.
"""

from fractions import Fraction

from qcbracket import GaussianRational, HbarSeries, Observable, QCMonomial

MINUS_I_HBAR = HbarSeries({1: GaussianRational(0, -1)})


def swap_normal_form(t: int, r: int) -> Observable:
    """Normal-order the word p^t q^r by literal rewrites pq -> qp - i*hbar."""
    pending = {("p",) * t + ("q",) * r: HbarSeries(1)}
    finished: dict[tuple, HbarSeries] = {}
    while pending:
        successors: dict[tuple, HbarSeries] = {}
        for word, coeff in pending.items():
            spot = _first_inversion(word)
            if spot is None:
                _accumulate(finished, word, coeff)
                continue
            swapped = word[:spot] + ("q", "p") + word[spot + 2:]
            dropped = word[:spot] + word[spot + 2:]
            _accumulate(successors, swapped, coeff)
            _accumulate(successors, dropped, coeff * MINUS_I_HBAR)
        pending = {w: c for w, c in successors.items() if c}
    collected: dict[QCMonomial, HbarSeries] = {}
    for word, coeff in finished.items():
        n_q = word.count("q")
        assert word == ("q",) * n_q + ("p",) * (len(word) - n_q)
        _accumulate(collected, QCMonomial(0, 0, n_q, len(word) - n_q), coeff)
    return Observable({m: c for m, c in collected.items() if c})


def _first_inversion(word):
    for i in range(len(word) - 1):
        if word[i] == "p" and word[i + 1] == "q":
            return i
    return None


def _accumulate(table, key, value):
    table[key] = table.get(key, HbarSeries(0)) + value


def build(spec: dict) -> Observable:
    """Observable from {(nx, nk, nq, np): {hbar_degree: (re, im)}}.

    Rational parts may be ints or (numerator, denominator) pairs.
    """
    return Observable({
        QCMonomial(*exponents): HbarSeries({
            degree: GaussianRational(_fraction(re), _fraction(im))
            for degree, (re, im) in series.items()})
        for exponents, series in spec.items()})


def _fraction(value) -> Fraction:
    if isinstance(value, tuple):
        return Fraction(*value)
    return Fraction(value)
