"""Import the compiled module and exercise each exported call once."""

import cmath
import math

import ncriesz


def main():
    m0 = ncriesz.truncation_symbol(1e-4, 2)
    assert abs(m0 - 1.0) < 1e-3, m0

    m1 = ncriesz.truncation_symbol(1.0, 3)
    assert -1.0 < m1 < 1.0, m1

    dm = ncriesz.truncation_symbol_derivative(0.5, 2)
    assert dm < 0.0, dm

    sq = ncriesz.square_function_integral(2)
    assert abs(sq - 0.5) < 2e-4, sq
    assert ncriesz.square_function_integral(3) <= 0.5 + 1e-4

    l1 = ncriesz.phi_l1_norm(1.0, 2)
    assert abs(l1 - 1.0) < 5e-3, l1

    ph = ncriesz.weyl_phase([1.0, 0.0], [0.0, 1.0], "0,1;-1,0")
    assert abs(ph - cmath.exp(0.5j)) < 1e-12, ph
    assert abs(ncriesz.weyl_phase([1.0, 0.0], [0.0, 1.0], "0,0;0,0") - 1.0) < 1e-15

    row = ncriesz.torus_maximal_ratio(seed=7, theta="0,1/4;-1/4,0", p=2.0, degree=2, eps_count=5)
    assert row["converged"], row
    assert row["maximal_upper"] > 0.0, row
    assert row["maximal_lower"] <= row["maximal_upper"] + 1e-8, row
    assert not math.isnan(row["ratio"]), row
    assert row["ratio"] <= row["bound"] + 1e-6, row

    again = ncriesz.torus_maximal_ratio(seed=7, theta="0,1/4;-1/4,0", p=2.0, degree=2, eps_count=5)
    assert again["maximal_upper"] == row["maximal_upper"], (again, row)

    try:
        ncriesz.torus_maximal_ratio(seed=1, theta="0,0.25;-0.25,0")
    except RuntimeError:
        pass
    else:
        raise AssertionError("decimal theta entry must be rejected")

    print("python smoke: ok")


if __name__ == "__main__":
    main()
