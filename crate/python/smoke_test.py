#!/usr/bin/env python3
"""Smoke test for the crsum_py extension module.

Builds are produced by cargo (see README); this script locates the compiled
library, stages it under an importable name, and exercises the main surface.

Usage:
    cargo build -p crsum-py            # or --release / --features extension-module
    python3 python/smoke_test.py
"""

import json
import os
import shutil
import sys
import tempfile
from fractions import Fraction


def locate_library():
    override = os.environ.get("CRSUM_PY_LIB")
    if override:
        return override
    here = os.path.dirname(os.path.abspath(__file__))
    root = os.path.dirname(here)
    candidates = []
    for profile in ("release", "debug"):
        for stem in ("libcrsum_py.so", "libcrsum_py.dylib", "crsum_py.dll"):
            candidates.append(os.path.join(root, "target", profile, stem))
    for path in candidates:
        if os.path.exists(path):
            return path
    sys.exit(
        "crsum_py library not found; run `cargo build -p crsum-py` first "
        "(or set CRSUM_PY_LIB)"
    )


def stage_and_import():
    src = locate_library()
    staging = tempfile.mkdtemp(prefix="crsum_py_")
    suffix = ".pyd" if src.endswith(".dll") else ".so"
    shutil.copyfile(src, os.path.join(staging, "crsum_py" + suffix))
    sys.path.insert(0, staging)
    import crsum_py

    return crsum_py


PASSED = 0


def check(name, condition):
    global PASSED
    if not condition:
        sys.exit(f"FAIL: {name}")
    PASSED += 1
    print(f"ok - {name}")


def main():
    cr = stage_and_import()

    check("factorize(12)", cr.factorize(12) == [(2, 2), (3, 1)])
    check("factorize(1)", cr.factorize(1) == [])
    check("mobius", (cr.mobius(1), cr.mobius(12), cr.mobius(30)) == (1, 0, -1))
    check("squarefree", cr.is_squarefree(6) and not cr.is_squarefree(8))
    check("omega(30)", cr.omega(30) == 3)
    check("jordan_totient(2, 4)", cr.jordan_totient(2, 4) == 12)
    check("klee_phi(2, 12)", cr.klee_phi(2, 12) == 9)
    check("klee relation", cr.klee_phi(2, 16) == cr.jordan_totient(2, 4))
    check("generalized_gcd(8, 12, 2)", cr.generalized_gcd(8, 12, 2) == 4)
    check("core/star of 12", (cr.core(12), cr.star(12)) == (6, 2))
    check("divisors(6)", cr.divisors(6) == [1, 2, 3, 6])
    check("xi_s(2, 8, 2)", cr.xi_s(2, 8, 2) == 4)

    check("cr_sum mobius", cr.cr_sum(2, 4, 2) == 3)
    check(
        "routes agree",
        cr.cr_sum(6, 3, 1)
        == cr.cr_sum(6, 3, 1, method="multiplicative")
        == cr.cr_sum(6, 3, 1, method="hoelder")
        == -2,
    )
    check("hoelder-literal audit value", cr.cr_sum(2, 4, 2, method="hoelder-literal") == -4)

    value, residual = cr.cr_direct(2, 4, 2)
    check("cr_direct value", value == 3)
    check("cr_direct residual", residual < 1e-6)
    check("classical_ramanujan(6, 3)", cr.classical_ramanujan(6, 3) == -2)
    check("twisted(2, 4, 2)", cr.twisted(2, 4, 2) == -3)

    lhs, rhs = cr.reciprocity_sides(4, 3, 1)
    check("reciprocity_sides(4, 3, 1)", lhs == rhs == Fraction(1))
    lhs, rhs = cr.reciprocity_sides(12, 10, 2)
    check("reciprocity general form", lhs == rhs)

    report = json.loads(cr.verify_identity("reciprocity", kmax=15, nmax=15, s=[1, 2]))
    check("verify reciprocity passes", report["failures"] == [])
    check("verify counts cases", report["cases_checked"] == 15 * 15 * 2)
    audit = json.loads(cr.verify_identity("hoelder-literal-audit"))
    check("audit finds counterexamples", len(audit["failures"]) > 0)
    check("identity registry", "twisted-sum" in cr.identity_names())

    a = [(1, Fraction(1)), (6, Fraction(1, 5))]
    b = cr.transform_first_to_second(a)
    check("first-to-second keeps mu(6) = 1", dict(b)[6] == Fraction(1, 5))
    back = cr.transform_second_to_first(b, 2)
    check("transform round trip", back == a)
    for n in range(1, 13):
        if cr.eval_first(a, 1, n) != cr.eval_second(b, 1, n):
            sys.exit(f"FAIL: series equivalence at n={n}")
    check("series equivalence n <= 12", True)
    check(
        "weighted xi differs at n = 4",
        cr.eval_second(b, 1, 4, xi="weighted") == 2 * cr.eval_second(b, 1, 4),
    )

    lifted = [(1, Fraction(2, 3)), (4, Fraction(1, 2))]  # roots 1 and 2 at s = 2
    check("hardy-wright round trip", cr.a_from_b(cr.b_from_a(lifted, 2), 2) == lifted)

    check("zeta(2)", cr.zeta_even(1).startswith("1.6449340668"))
    check("zeta(4)", cr.zeta_even(2).startswith("1.0823232337"))

    series = cr.klee_series(1, 1, 1000)
    check("klee target is zeta(2)", series["target"].startswith("1.64493"))
    check("klee error bound", float(series["final_abs_error"]) < 2e-3)
    prime = cr.klee_cr_prime(1, 1, 500)
    check("cr-prime converges at n=1", float(prime["final_abs_error"]) < 1e-2)

    lhs, rhs = cr.coefficient_identity(2, 1, 10000)
    check("coefficient identity", abs(float(lhs) - float(rhs)) < 1e-3)

    for bad_call in (
        lambda: cr.mobius(0),
        lambda: cr.cr_sum(2, 4, 2, method="nope"),
        lambda: cr.jordan_totient(0, 5),
        lambda: cr.transform_first_to_second([(4, Fraction(1))]),
    ):
        try:
            bad_call()
        except ValueError:
            continue
        sys.exit("FAIL: expected ValueError")
    check("error paths raise ValueError", True)

    print(f"\nall {PASSED} smoke checks passed")


if __name__ == "__main__":
    main()
