#!/usr/bin/env python3
"""Smoke test for the hiord_py extension module.

Builds nothing itself: expects `cargo build -p hiord-py` (or --release) to
have produced target/{debug,release}/libhiord_py.so already. Exercises one
call of every exported function and checks the results against
independently known values.
"""

import shutil
import sys
import tempfile
from decimal import Decimal, getcontext
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        REPO_ROOT / "target" / "release" / "libhiord_py.so",
        REPO_ROOT / "target" / "debug" / "libhiord_py.so",
    ]
    for so in candidates:
        if so.exists():
            stage = Path(tempfile.mkdtemp(prefix="hiord_py_"))
            shutil.copy2(so, stage / "hiord_py.so")
            sys.path.insert(0, str(stage))
            import hiord_py

            return hiord_py
    sys.exit(
        "libhiord_py.so not found; run `cargo build -p hiord-py` first "
        f"(searched {', '.join(str(c) for c in candidates)})"
    )


def check(name, condition, detail=""):
    if not condition:
        sys.exit(f"FAIL {name}: {detail}")
    print(f"ok   {name}")


def main():
    hiord = load_module()
    getcontext().prec = 80
    sqrt2 = Decimal(2).sqrt()
    x_squared_minus_2 = ["-2", "0", "1"]

    # Exact rational layer: A_0..A_2 for x^2-2 at 3/2, and the steps they
    # induce (Newton's 17/12 and the classic 99/70 convergent of sqrt 2).
    seq = hiord.ak_sequence(x_squared_minus_2, "3/2", 2)
    check("ak_sequence", seq == ["1", "3", "35/4"], f"got {seq}")
    newton = hiord.householder_step(x_squared_minus_2, "3/2", 1)
    check("householder_step k=1", newton == "17/12", f"got {newton}")
    halley = hiord.householder_step(x_squared_minus_2, "3/2", 2)
    check("householder_step k=2", halley == "99/70", f"got {halley}")

    check(
        "verify_identities",
        hiord.verify_identities(["1", "0", "-2", "0", "1"], k_max=6) is True,
    )

    # High-precision solver: order-3 iteration on x^2-2 from 1.5.
    result = hiord.solve_polynomial(x_squared_minus_2, "1.5", order=3, precision=256)
    check(
        "solve_polynomial status",
        result["status"] == "converged",
        f"got {result['status']}",
    )
    gap = abs(Decimal(result["root"]) - sqrt2)
    check("solve_polynomial root", gap < Decimal("1e-60"), f"gap {gap}")

    # Asymptotic error factor of the order-4 iteration at sqrt 2 is
    # sqrt(2)/32 in magnitude.
    factor = Decimal(
        hiord.convergence_factor(x_squared_minus_2, str(sqrt2), 4, precision=2048)
    )
    expected = sqrt2 / 32
    check(
        "convergence_factor",
        abs(abs(factor) - expected) < Decimal("1e-50"),
        f"got {factor}, expected magnitude {expected}",
    )

    # Entropy layer: forward value, inverse, and the coding-theory distance.
    h = hiord.entropy("2", "0.25")
    check("entropy", h.startswith("0.811278124459"), f"got {h}")
    inv = hiord.entropy_inverse("2", "0.5")
    check(
        "entropy_inverse",
        inv["root"].startswith("0.1100278644383595") and inv["status"] == "converged",
        f"got {inv}",
    )
    d = hiord.gv_distance("2", "0.5")
    check("gv_distance", d.startswith("0.1100278644383595"), f"got {d}")
    d_mersenne = hiord.gv_distance("2^127-1", "0.5")
    check(
        "gv_distance 2^127-1",
        d_mersenne.startswith("0.492127392424819"),
        f"got {d_mersenne}",
    )

    # Basin renderer on z^6 - z + 1 over a small grid.
    basins = hiord.render_basins(
        ["1", "-1", "0", "0", "0", "0", "1"],
        size=20,
        order=2,
        precision=128,
        max_iter=60,
    )
    roots = basins["roots"]
    labels = basins["labels"]
    check("render_basins roots", len(roots) == 6, f"got {len(roots)} roots")
    check(
        "render_basins grid",
        len(labels) == 20 and all(len(row) == 20 for row in labels),
        "grid is not 20x20",
    )
    seen = {label for row in labels for label in row}
    check(
        "render_basins labels",
        seen.issubset({-1, 0, 1, 2, 3, 4, 5}) and len(seen - {-1}) >= 3,
        f"labels seen: {sorted(seen)}",
    )

    print("SMOKE OK")


if __name__ == "__main__":
    main()
