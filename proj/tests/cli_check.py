"""End-to-end checks of the command line tool: exit codes and parseable output."""
import csv
import json
import math
import os
import subprocess
import sys

cli, work = sys.argv[1], sys.argv[2]
os.makedirs(work, exist_ok=True)
failures = []


def run(*args, expect=0):
    p = subprocess.run([cli, *args], capture_output=True, text=True, timeout=600)
    if p.returncode != expect:
        failures.append(f"{' '.join(args)}: exit {p.returncode}, wanted {expect}\n{p.stderr}")
    return p


def check(cond, what):
    if not cond:
        failures.append(what)


def path(name):
    return os.path.join(work, name)


def rows(name):
    with open(path(name), newline="") as f:
        return list(csv.DictReader(f))


crossing = json.loads(run("crossing").stdout)
check(abs(crossing["k0"] + 4.47675) < 1e-4, f"k0 = {crossing['k0']}")
check(abs(crossing["kappa0"] + 4.54605) < 1e-4, f"kappa0 = {crossing['kappa0']}")

# The same invocation twice must give byte-identical output.
check(run("crossing").stdout == run("crossing").stdout, "crossing output is not deterministic")

model = json.loads(run("model", "--model", "symmetric").stdout)
check(model["reflection"]["conditions_hold"], "symmetric model fails the reflection conditions")

run("dispersion", "--csv", path("disp.csv"), "-o", path("disp.json"))
d = rows("disp.csv")
check(len(d) == 2401, f"dispersion rows = {len(d)}")
check(list(d[0].keys()) == ["k"] + [f"re_z{i}" for i in range(1, 5)] + [f"im_z{i}" for i in range(1, 5)] + ["omega"],
      "dispersion header")
check(all(math.isclose(float(r["omega"]), max(float(r[f"re_z{i}"]) for i in range(1, 5))) for r in d),
      "omega is not the max real part")
with open(path("disp.json")) as f:
    check(json.load(f)["classification"] == "oscillatory", "nonsymmetric classification")

verify = json.loads(run("verify").stdout)
check(verify["status"] == "pass", "verify nonsymmetric")

single = json.loads(run("hopf-single").stdout)
check(abs(single["z_prime_k"]["re"] - 0.896648) < 1e-5, "Re dz/dk")
check(single["branch_type"] in ("supercritical", "subcritical", "degenerate"), "branch type")

multi = json.loads(run("hopf-multiple", "--model", "symmetric", "--tensor-csv", path("tensor.csv")).stdout)
t = rows("tensor.csv")
check(len(t) == 16, f"tensor rows = {len(t)}")
check(abs(multi["a"]["im"] + 0.0406767) < 1e-6, "Im a")
run("hopf-multiple", "--model", "symmetric", "--shift", "sideways", expect=2)

with open(path("cfg.json"), "w") as f:
    json.dump({"model": "symmetric", "T": 2.0, "N": 16}, f)
sim = json.loads(run("simulate", "--config", path("cfg.json"), "--T", "1", "--csv", path("sim.csv"),
                     "--stride", "200", "--points", "8").stdout)
s = rows("sim.csv")
check(list(s[0].keys()) == ["t", "x", "y1", "y2", "y3", "y4"], "simulate header")
check(abs(float(s[-1]["t"]) - 1.0) < 1e-9, f"flag did not override config: last t = {s[-1]['t']}")
check(not sim["blowup"], "short symmetric run blew up")

with open(path("bad.json"), "w") as f:
    json.dump({"bogus": 1}, f)
run("model", "--config", path("bad.json"), expect=2)
with open(path("broken.json"), "w") as f:
    f.write("{not json")
run("model", "--config", path("broken.json"), expect=2)
run("model", "--epsilon0", "-1", expect=2)
run("no-such-command", expect=2)

out = run("reproduce", "--criteria", "1,2").stdout
check("overall: pass" in out, "reproduce 1,2 did not pass")

for msg in failures:
    print("FAIL:", msg)
print("cli checks:", "pass" if not failures else f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
