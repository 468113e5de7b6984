"""What the frozen files under ``tests/goldens`` contain and how to rebuild them.

Run ``python tests/make_goldens.py`` only when an output change is intended;
the acceptance tests compare fresh output with the frozen bytes.
"""

from pathlib import Path

from proxyfinder import build_scenario, entropy, scenario_names, solve_exact_min
from proxyfinder.serialize import dumps

GOLDEN_DIR = Path(__file__).parent / "goldens"
K3_EDGES = GOLDEN_DIR / "k3.txt"
SCENARIO_GOLDEN = GOLDEN_DIR / "scenarios.json"

# alpha as a fraction of H(target)
ALPHA_GRID = (0.0, 0.25, 0.5, 0.9)


def scenario_golden_doc() -> dict:
    doc = {}
    for name in scenario_names():
        for direct in (True, False):
            base = build_scenario(name, include_direct=direct)
            h = entropy(base.distribution, base.target)
            runs = []
            for frac in ALPHA_GRID:
                inst = base.replace(alpha=frac * h)
                runs.append({"alpha_fraction": frac, "alpha": inst.alpha, "exact": solve_exact_min(inst).to_json()})
            doc[f"{name}/{'direct' if direct else 'indirect'}"] = {"target_entropy_bits": h, "runs": runs}
    return doc


def scenario_golden_text() -> str:
    return dumps(scenario_golden_doc())


def cli_cases(out: Path) -> dict[str, list[str]]:
    """Golden file name -> argv writing the report to ``out``.

    Cases that accept ``--jobs`` are also run in parallel by the tests.
    """
    return {
        "gen_vc_k3.json": ["gen-vc", "--edges", str(K3_EDGES), "--k", "2", "--out", str(out)],
        "solve_k3_exact.json": [
            "solve", "--mode", "exact", "--scenario", str(GOLDEN_DIR / "gen_vc_k3.json"), "--out", str(out), "-q",
        ],
        "solve_user_id_greedy.json": ["solve", "--mode", "greedy", "--name", "user_id", "--out", str(out), "-q"],
        "compare_random20_seed1.json": ["compare", "--random", "20", "--seed", "1", "--out", str(out), "-q"],
    }
