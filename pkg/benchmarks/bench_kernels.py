"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--horizon 20000] [--repeat 3]

Each backend runs in a fresh interpreter because the backend is chosen
at import time.
"""

import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, time
import numpy as np
from bsvbs import kernels
from bsvbs.environment import ScenarioSpec, SurrogateModel, draw_contexts
from bsvbs.space import ConfigurationSpace
from bsvbs.learner import init

T, repeat = int(sys.argv[1]), int(sys.argv[2])
space = ConfigurationSpace.default()
ctx = draw_contexts(ScenarioSpec(), T, seed=0)
model = SurrogateModel()
pol = space.policy_matrix()

def best(fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter(); out = fn(); times.append(time.perf_counter() - t0)
    return min(times), out

t_tab, tab = best(lambda: kernels.surrogate_table(ctx, pol, model.coeffs(), model.tx_max))
rewards = np.clip(tab[0] / 2.0, 0.0, 1.0)

def play():
    s = init(len(space), T, seed=0)
    return kernels.exp3_play(rewards, s.log_weights, s.gamma, False, 1, s.rng.state)

t_play, res = best(play)
print(json.dumps({"backend": kernels.BACKEND, "surrogate_table_s": t_tab, "exp3_play_s": t_play,
                  "arms_checksum": int(np.asarray(res[0]).sum()),
                  "table_checksum": float(tab[3].sum())}))
"""


def measure(pure: bool, horizon: int, repeat: int) -> dict:
    env = dict(os.environ)
    if pure:
        env["BSVBS_PURE_PYTHON"] = "1"
    else:
        env.pop("BSVBS_PURE_PYTHON", None)
    out = subprocess.run([sys.executable, "-c", CHILD, str(horizon), str(repeat)],
                         env=env, check=True, capture_output=True, text=True)
    return json.loads(out.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--horizon", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast = measure(False, args.horizon, args.repeat)
    slow = measure(True, args.horizon, args.repeat)
    if fast["backend"] != "compiled":
        print("compiled extension not available; only the Python backend was measured")
    for key in ("surrogate_table_s", "exp3_play_s"):
        print(f"{key[:-2]:>16}: python {slow[key] * 1e3:9.2f} ms  {fast['backend']} {fast[key] * 1e3:9.2f} ms"
              f"  speedup {slow[key] / fast[key]:6.1f}x")
    same = fast["arms_checksum"] == slow["arms_checksum"] and fast["table_checksum"] == slow["table_checksum"]
    print(f"outputs identical across backends: {same}")


if __name__ == "__main__":
    main()
