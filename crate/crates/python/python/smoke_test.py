"""Smoke test for the nilcpa extension module.

Build first, e.g. `maturin develop -m crates/python/Cargo.toml`, or copy the
compiled library next to this script as `nilcpa.so`.
"""

import json
from fractions import Fraction

import nilcpa


def main():
    assert nilcpa.witt_dimensions(2, 10) == ["2", "3", "5", "8", "14", "23", "41", "71", "127", "226"]

    f33 = nilcpa.LieAlgebra.catalog("F_3_3_hall")
    f33.validate()
    assert f33.dim == 14 and f33.center_dim() == 8
    assert f33.lower_central_dims() == [14, 11, 8, 0]
    assert nilcpa.grid(f33) == (48, True, True)

    h3 = nilcpa.LieAlgebra.catalog("h3")
    assert h3.bracket([1, 0, 0], [0, 1, 0]) == ["0", "0", "1"]
    again = nilcpa.LieAlgebra.from_json(h3.to_json())
    assert again.names == h3.names

    p = nilcpa.CpaProduct(h3, [((0, 0), [0, 1, 0]), ((0, 1), [0, 0, Fraction(1, 2)])])
    report = p.verify()
    assert report["symmetry"] is None and report["representation"] is None and report["derivation"] is None
    assert report["is_complete"] and not report["is_central"]
    assert p.product([1, 0, 0], [0, 1, 0]) == ["0", "0", "1/2"]
    assert json.loads(p.to_json())["products"][1] == [1, 2, [[3, "1/2"]]]

    solved = nilcpa.solve_cpa(nilcpa.LieAlgebra.catalog("F_2_3_hall"))
    assert solved["verdict"] == "yes" and solved["variety"]["parameters"] == 6

    solved = nilcpa.solve_cpa(h3)
    assert solved["verdict"] == "no"
    assert not solved["witness"].verify()["is_central"]

    assert nilcpa.property_f(nilcpa.LieAlgebra.catalog("n4"))["verdict"] == "false"
    assert nilcpa.property_f(nilcpa.LieAlgebra.free_nilpotent(2, 4))["verdict"] == "true"

    scan = nilcpa.conjecture(6)
    assert all(c["central"] for c in scan["classes"])

    try:
        nilcpa.LieAlgebra.catalog("h4")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown catalog name accepted")

    print("nilcpa smoke test passed")


if __name__ == "__main__":
    main()
