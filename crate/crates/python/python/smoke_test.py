"""Smoke test for the expmap_py extension module.

Build and install first, e.g. `maturin develop` or
`pip install .` from crates/python, then run this script.
"""

import expmap_py as em


def main():
    ring = em.Ring("Q", ["u", "v"])
    f = ring.parse("u*v + 1")
    assert str(f * f) == "u^2*v^2 + 2*u*v + 1", str(f * f)
    assert ring.parse("v") ** 2 == ring.parse("v^2")

    sigma = em.ExpMap(ring, ["u", "v + u*x"])
    valid, report = sigma.validate()
    assert valid and report.endswith("VALID"), report
    assert sigma.apply("v^2") == ["v^2", "2*u*v", "u^2"]
    assert sigma.deg_sigma("v^3") == 3 and sigma.lc_sigma("v^3") == "u^3"
    assert sigma.invariant_basis(3) == ["1", "u", "u^2", "u^3"]
    assert sigma.local_slices(2) == (1, [("v", "u"), ("u*v", "u^2")])
    assert sigma.minimal_local_slice(2) == ("v", "u")
    assert sigma.decompose("v", "u^2*v^3", ["u"]) == (0, ["0", "0", "0", "u^2"])

    bad = em.ExpMap(ring, ["u", "v + u*x + x^2"])
    valid, report = bad.validate()
    assert not valid and "2*x*y" in report

    f2 = em.ExpMap(em.Ring("Fp:2", ["y0"]), ["y0 + x^2"])
    assert f2.decompose("y0", "y0^3 + 1") == (0, ["1", "0", "0", "1"])

    assert [em.d_of_n(n) for n in (4, 6, 9, 12)] == [2, 1, 3, 1]

    code, text = em.run_command(
        "verify",
        'field = "Q"\nvars = ["u", "v"]\nsigma.u = "u"\nsigma.v = "v + u*x"\n'
        'slice = "v"\nfactors = ["u"]\nwindow = 4\n',
    )
    assert code == 0 and "MONOMIALS: 15/15 PASS" in text, text

    try:
        em.Ring("Q", ["x"])
    except ValueError:
        pass
    else:
        raise AssertionError("x must be rejected as a variable")
    print("smoke test: OK")


if __name__ == "__main__":
    main()
