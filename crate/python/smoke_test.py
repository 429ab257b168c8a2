"""Smoke test for the mahlerlab extension module.

Build and install first:
    pip install --no-build-isolation -e crates/python
"""

import sys

import mpmath

import mahlerlab


def main() -> int:
    failures = []

    def expect(cond, what):
        print(("ok   " if cond else "FAIL ") + what)
        if not cond:
            failures.append(what)

    mpmath.mp.dps = 40
    z = mahlerlab.compute("zeta", ["3"], digits=30)
    expect(z["value"] == mpmath.nstr(mpmath.zeta(3), 31, strip_zeros=False), f"zeta(3) = {z['value']}")

    k = mahlerlab.compute("K", ["0.5"], digits=25)
    expect(abs(mpmath.mpf(k["value"]) - mpmath.ellipk(mpmath.mpf("0.25"))) < 1e-24, f"K(1/2) = {k['value']}")

    g = mahlerlab.compute("catalan", digits=20)
    expect(abs(mpmath.mpf(g["value"]) - mpmath.catalan) < 1e-19, f"Catalan = {g['value']}")

    a = mahlerlab.coefficients("f", 12)
    expect(a[:7] == [1, 0, -4, 0, -2, 0, 24], f"f coefficients {a}")

    for p, t in [(5, 2), (7, 3), (11, 1)]:
        brute = sum(
            1
            for x in range(p)
            for y in range(p)
            for z in range(p)
            for w in range(p)
            if ((x * x + 1) * (y * y + 1) * (z * z + 1) * (w * w + 1) - 16 * t * x * y * z * w) % p == 0
        )
        expect(mahlerlab.point_count(p, t) == brute, f"#H_{t}(F_{p}) = {brute}")

    r = mahlerlab.verify("thm-1.1", precision=128)
    expect(r["pass"] and r["deviation"] < 1e-20, f"thm-1.1 deviation {r['deviation']:.3e}")

    exact = mahlerlab.verify_all(["wz"])
    expect(len(exact) == 4 and all(x["deviation"] == 0 for x in exact), "WZ checks exact")

    expect("eq-2.4" in mahlerlab.check_ids(), "registry lists eq-2.4")
    expect(mahlerlab.SCHEMA_VERSION == "v1", "schema version")

    try:
        mahlerlab.verify("eq-9.9")
        expect(False, "unknown id raises")
    except KeyError as e:
        expect("did you mean" in str(e), "unknown id raises KeyError with suggestions")

    try:
        mahlerlab.compute("K", ["2"])
        expect(False, "K(2) raises")
    except ValueError:
        expect(True, "K(2) raises ValueError")

    print(f"{len(failures)} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
