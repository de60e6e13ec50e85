#!/usr/bin/env python3
"""Smoke test for the pdo extension module.

Builds the cdylib if needed, stages it on sys.path under the importable
name, and exercises the main surface: ring construction, derivations,
series arithmetic with its commutation rule, radicals, and the
verification harness.
"""

import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def stage_module() -> None:
    lib = None
    for profile in ("release", "debug"):
        cand = ROOT / "target" / profile / "libpdo.so"
        if cand.exists():
            lib = cand
            break
    if lib is None:
        subprocess.run(
            ["cargo", "build", "-p", "pdo-python"], cwd=ROOT, check=True
        )
        lib = ROOT / "target" / "debug" / "libpdo.so"
    stage = Path(tempfile.mkdtemp(prefix="pdo-py-"))
    shutil.copy2(lib, stage / "pdo.so")
    sys.path.insert(0, str(stage))


stage_module()
import pdo  # noqa: E402


def expect_value_error(fn, what):
    try:
        fn()
    except ValueError:
        return
    raise AssertionError(f"expected ValueError: {what}")


# Modular arithmetic and the radicals of Z4.
z4 = pdo.Ring.zn(4)
assert z4.order == 4 and z4.zero == 0 and z4.one == 1 and z4.is_unital
assert z4.add(3, 2) == 1 and z4.mul(2, 2) == 0 and z4.neg(1) == 3
assert z4.int(-1) == 3
assert pdo.prime_radical(z4) == [0, 2]
assert pdo.radideal_il(z4) == [0, 2]
assert z4.display_set([0, 2]) == "{0, 2}"

ok, bound, cycle = pdo.is_left_t_nilpotent(z4, [2])
assert ok and bound == 2 and cycle is None
ok, bound, cycle = pdo.is_left_t_nilpotent(z4, [1])
assert not ok and bound is None and cycle == [1, 1]

stages, limit, step = pdo.higher_radideals(z4)
assert stages[0] == [0, 2] and limit == [0, 2] and step == 1

# Annihilator tower of the ideal (2) in Z8 climbs {0} < {0,4} < (2).
z8 = pdo.Ring.zn(8)
stages, reached_top, step, delta_stable = pdo.annihilator_series(z8, [2])
assert stages == [[0], [0, 4], [0, 2, 4, 6]]
assert reached_top and step == 2 and delta_stable is None
assert pdo.ideal(z8, [2]) == [0, 2, 4, 6]
assert pdo.nilpotency_index(z8, [2]) == 3

# Dual numbers over Z2 with d/da: the commutation rule x*a = a*x + d(a).
dual = pdo.Ring.truncated_poly(2, [2])
a = dual.symbol("a")
assert a is not None and dual.name(a) == "a"
d = pdo.Derivation.partial(dual, 0)
assert d.apply(a) == dual.one and d.death(a) == 2
sr = pdo.SeriesRing(dual, d)
x = sr.x()
sa = sr.element(a)
assert str(x * sa) == "a*x + 1"
assert str(sr.x(-1) * sa) == "a*x^-1 + x^-2"

# g = a*x + 1 is idempotent in this operator ring.
g = sr.series([(1, a)]) + sr.one()
assert g * g == g
assert (g - g).is_zero and (-g + g).is_zero
assert g.delta() == sr.one().shift(1)
assert g.terms() == [(0, dual.one), (1, a)]
assert g.coefficient(1) == a and g.coefficient(5) == dual.zero

# An orbit that never dies forces truncation; finite expansions stay exact.
# The Euler map c + d*a -> d*a fixes a, so its orbit repeats forever.
z3a = pdo.Ring.truncated_poly(3, [2])
b = z3a.symbol("a")


def a_part(e):
    for c in range(3):
        for d_coef in range(3):
            if z3a.add(z3a.int(c), z3a.int_scale(d_coef, b)) == e:
                return d_coef
    raise AssertionError(f"element {e} missed the basis sweep")


euler = pdo.Derivation.from_table(
    z3a, [z3a.int_scale(a_part(e), b) for e in z3a.elements()]
)
se = pdo.SeriesRing(z3a, euler, floor_drop=6)
sb = se.element(b)
exact = se.x() * sb
assert exact.is_exact and str(exact) == "a*x + a"
truncated = se.x(-1) * sb
assert not truncated.is_exact and truncated.floor == -6
assert str(truncated).endswith("+ O(x^-7)")
assert (sb * sb).is_zero

# Raw tables round through validation; Z2 by hand.
z2 = pdo.Ring.from_tables([[0, 1], [1, 0]], [[0, 0], [0, 1]])
assert z2.order == 2 and z2.one == 1
expect_value_error(
    lambda: pdo.Ring.from_tables([[0, 1], [0, 1]], [[0, 0], [0, 1]]),
    "broken addition table",
)

# Derivation-aware radideal on the dual numbers: d pushes a to the unit 1,
# so a survives in the plain radideal but not the derivation-aware one.
assert pdo.radideal_il(dual) == [0, a]
members, is_ideal, delta_stable = pdo.radideal_il_delta(dual, d)
assert members == [0] and is_ideal and delta_stable

# The tower reports stability flags only when the ideal is closed under
# the derivation; d(a) = 1 escapes (a), the zero map never does.
_, _, _, flags = pdo.annihilator_series(dual, [a], d)
assert flags is None
_, _, _, flags = pdo.annihilator_series(dual, [a], pdo.Derivation.zero(dual))
assert flags == [True, True]

# Mixing series from different rings is an error, not a wrong answer.
other = pdo.SeriesRing(dual, pdo.Derivation.zero(dual))
expect_value_error(lambda: g + other.one(), "cross-ring arithmetic")
expect_value_error(lambda: pdo.Derivation.from_table(z4, [0, 1, 2, 3]), "non-derivation table")

# The full verification harness, small budget.
ok, lines, jsonl = pdo.verify_all(seed=0, trials=25)
assert ok, "verification suites failed:\n" + "\n".join(lines)
assert len(lines) == 61 and len(jsonl.splitlines()) == 61
assert sum(1 for line in lines if " PASS" in line) == 55

print(f"smoke test passed ({len(lines)} verification suites)")
