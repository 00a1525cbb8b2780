"""Smoke test for the `antagonistic` extension module.

Build first, e.g. `maturin develop -m crates/python/Cargo.toml`, or copy
`target/release/libantagonistic.so` to `antagonistic.so` on PYTHONPATH.
"""

import json
import math

import antagonistic as ag

GAUSSIAN = json.dumps({"kind": "gaussian-antagonistic"})


def main():
    comp = json.dumps({"kind": "antagonistic", "pairs": {"kind": "gaussian-antagonistic"}})
    ens = ag.Ensemble(comp, 50, seed=7)
    assert ens.sample(0) == ens.sample(0)
    assert ens.sample(0) != ens.sample(1)
    assert ag.is_antagonistic(ens.sample(3))
    assert ag.Ensemble.from_json(ens.to_json()).to_json() == ens.to_json()

    spec = ens.spectrum(0)
    assert len(spec) == 50
    assert spec.residual < 1e-8
    trace = sum(ens.sample(0)[i][i] for i in range(50))
    assert abs(sum(spec.eigenvalues).real - trace) < 1e-8

    m = [[0.0, 1.0, -2.0, 0.5], [-1.0, 0.0, 3.0, 1.0], [2.0, -3.0, 0.0, -4.0], [-0.5, -1.0, 4.0, 0.0]]
    pf = ag.pfaffian(m)
    assert abs(pf * pf - ag.determinant(m)) < 1e-10

    assert abs(ag.pair_moments(GAUSSIAN)["theta"] - 2 / math.pi) < 1e-12
    assert abs(ag.rho_from_density(GAUSSIAN) + 2 / math.pi) < 1e-12
    assert ag.expected_char_poly([[1.0] * 4] * 4) == [3.0, 0.0, 6.0, 0.0, 1.0]

    small = ag.Ensemble(comp, 4, seed=1)
    res = small.mc_expect("det", trials=20000)
    assert abs(res["exact"] - 12 / math.pi**2) < 1e-12
    assert abs(res["z_score"]) < 4

    lo, hi, _, _ = ag.bendixson_box(m)
    assert lo <= 0 <= hi
    print("smoke test passed")


if __name__ == "__main__":
    main()
