"""Quick end-to-end check of the Python bindings.

Run after `pip install --no-build-isolation -e crates/py`.
"""

import json
import math
import pathlib

import reliattack as ra

FIXTURES = pathlib.Path(__file__).resolve().parents[2] / "cli" / "tests" / "fixtures"


def close(a, b, tol=1e-9):
    return math.isclose(a, b, rel_tol=0.0, abs_tol=tol)


def main():
    # Full credit splits each paper evenly among its authors when everyone shows up.
    fc = ra.Game.full_credit(3, [([1, 2], 4.0), ([1, 3], 3.0)])
    assert close(ra.shapley_values(fc, player=1), 3.5)

    # Closed forms against permutation enumeration.
    star = ra.Game.nc1(5, [(1, 2), (1, 3), (1, 4), (1, 5)])
    p = [0.9, 0.4, 0.7, 0.2, 0.55]
    for a, b in zip(ra.shapley_values(star, p), ra.shapley_definitional(star, p)):
        assert close(a, b), (a, b)

    # Threshold two: removing player 3 lowers Sh(1) from 7/6 to 1.
    path = ra.Game.nc2(3, [(1, 2), (2, 3)], 2)
    assert close(ra.shapley_definitional(path)[0], 7 / 6)
    verdict = ra.removal_no_benefit(path, 1)
    assert not verdict["passed"], verdict

    # Greedy on K4 against the brute-force oracle.
    k4 = ra.Game.nc1(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
    costs = ra.CostModel([0.9, 0.8, 0.6, 0.3], [1] * 4, [1.5] * 4, [0] * 4)
    plan = ra.attack(k4, 1, 0.7, costs)
    assert plan.total_cost <= 0.7 + 1e-9
    assert plan.achieved <= plan.shapley_before
    brute = ra.fractional_oracle(k4, 1, 0.7, costs)
    assert close(plan.achieved, brute.achieved, 1e-6), (plan, brute)
    assert set(plan.to_dict()) >= {"profile", "targeting_order", "total_cost"}

    # Budgeted Max-Coverage answered both ways.
    cmp = ra.bmc_compare((FIXTURES / "bmc_worked.json").read_text())
    assert cmp["agree"] and cmp["covered"] == 3, cmp

    # Round trip and error mapping.
    again = ra.Game.from_json(k4.to_json())
    assert again.n == 4 and again.name == k4.name
    try:
        ra.Game.nc1(3, [(1, 4)])
    except ValueError:
        pass
    else:
        raise AssertionError("bad edge accepted")

    print(json.dumps({"smoke": "ok", "k4_after": plan.achieved, "order": plan.targeting_order}))


if __name__ == "__main__":
    main()
