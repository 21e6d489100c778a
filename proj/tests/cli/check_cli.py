"""End-to-end checks of the command line tool: schemas, exit codes, values, reproducibility."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

BIN = sys.argv[1]
SCHEMAS = pathlib.Path(sys.argv[2])
failures = []


def run(*args, expect=0):
    p = subprocess.run([BIN, *args], capture_output=True, text=True)
    if p.returncode != expect:
        failures.append(f"{' '.join(args)}: exit {p.returncode}, expected {expect}\n{p.stderr}")
    return p.stdout


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def check(name, cond, detail=""):
    print(("ok   " if cond else "FAIL ") + name)
    if not cond:
        failures.append(f"{name} {detail}")


def validated(name, text):
    doc = json.loads(text)
    try:
        jsonschema.validate(doc, schema(name))
        check(f"schema {name}", True)
    except jsonschema.ValidationError as e:
        check(f"schema {name}", False, e.message)
    return doc


# exact
doc = validated("exact", run("exact", "--model", "labeled", "--n", "3"))
check("exact labeled n=3 is 5/9", doc["results"][0]["value"] == "5/9")
doc = validated("exact", run("exact", "--model", "labeled", "--n", "1"))
check("exact labeled n=1 is 1", doc["results"][0]["value"] == "1")
doc = validated("exact", run("exact", "--model", "ub", "--n", "4", "--classes"))
check("exact ub n=4 is 3/8", doc["results"][0]["value"] == "3/8")
doc = validated("exact", run("exact", "--D", "0,2", "--n-min", "1", "--n-max", "4"))
check("even sizes are unreachable for D={0,2}", doc["results"][1].get("unreachable") is True)
a = run("exact", "--model", "plane", "--n-min", "1", "--n-max", "9")
b = run("exact", "--model", "plane", "--n-min", "1", "--n-max", "9")
check("exact output is byte reproducible", a == b)

# series
doc = validated("series", run("series", "--family", "polya", "--t", "0", "--order", "6"))
check("series polya t=0", [c["coefficient"] for c in doc["coefficients"]] == ["1", "1", "2", "4", "9", "20"])
check("series polya t=0 oracle agrees", doc["oracle"]["agrees"] is True)
doc = validated("series", run("series", "--family", "ub", "--t", "1", "--order", "5"))
check("series ub t=1 Motzkin", [c["coefficient"] for c in doc["coefficients"]] == ["1", "1", "2", "4", "9"])
doc = validated("series", run("series", "--family", "polya", "--t", "2", "--order", "3"))
check("series polya t=2", [c["coefficient"] for c in doc["coefficients"]] == ["1", "1", "5/4"])
doc = validated("series", run("series", "--family", "degree", "--D", "0,1,3", "--w", "1,1/2,1/2", "--t", "2", "--order", "9"))
check("series custom model oracle agrees", doc["oracle"]["agrees"] is True)
doc = validated("series", run("series", "--family", "polya", "--t", "1/2", "--field", "real", "--order", "4"))
check("series real field without oracle", doc["oracle"]["agrees"] is None)
run("series", "--family", "polya", "--t", "1/2", "--order", "4", expect=4)

# mc
doc = validated("mc", run("mc", "--model", "labeled", "--n", "3", "--samples", "1000000", "--seed", "7"))
r = doc["results"][0]
check("mc labeled n=3 interval contains 5/9", r["ci_low"] <= 5 / 9 <= r["ci_high"])
doc = validated("mc", run("mc", "--model", "labeled", "--n", "1", "--samples", "1000"))
check("mc labeled n=1 is exactly 1", doc["results"][0]["estimate"] == 1.0)
doc = validated("mc", run("mc", "--model", "ub", "--n", "8", "--samples", "1000000", "--strict"))
check("mc ub n=8 interval contains the exact value", doc["results"][0]["exact_in_ci"] is True)
one = run("mc", "--model", "ub", "--n-min", "5", "--n-max", "6", "--samples", "200000", "--workers", "1")
two = json.loads(run("mc", "--model", "ub", "--n-min", "5", "--n-max", "6", "--samples", "200000", "--workers", "3"))
one = json.loads(one)
check("mc results do not depend on the worker count", one["results"] == two["results"])

# asym
doc = validated("asym", run("asym", "--which", "labeled"))
vals = {c["name"]: c["value"] for c in doc["constants"]}
check("asym labeled A", abs(vals["A"] - 2.397678) < 1e-4)
check("asym labeled c_l", abs(vals["c_l"] - 0.354379) < 1e-5)
doc = validated("asym", run("asym", "--which", "ub"))
vals = {c["name"]: c["value"] for c in doc["constants"]}
check("asym ub delta and C", abs(vals["delta"] - 0.412681) < 1e-5 and abs(vals["C"] - 1.279101) < 1e-4)
doc = validated("asym", run("asym", "--which", "logweight", "--model", "binary121"))
check("asym logweight within tolerance", doc["within_tolerance"] is True)
doc = validated("asym", run("asym", "--which", "degree", "--degrees", "0,1", "--law", "labeled", "--no-stability"))
check("asym degree labeled leaf mean is 1/e", abs(doc["constants"][0]["value"] - 0.36787944117144233) < 1e-9)
doc = validated("asym", run("asym", "--which", "labeled", "--bracket", "0.39,0.40", expect=2))
check("asym reports a bad bracket", "error" in doc)

# plane decay
doc = validated("plane-decay", run("plane-decay", "--n-max", "8", "--format", "json"))
check("plane decay n=5 has 14 plane trees", doc["rows"][4]["plane_trees"] == "14")
check("plane decay n=1 has q=1", doc["rows"][0]["q"] == "1")
csv = run("plane-decay", "--n-max", "5")
check("plane decay csv header", csv.splitlines()[1] == "n,plane_trees,q,q_decimal,rate")

# records and cache
with tempfile.TemporaryDirectory() as tmp:
    first = run("records", "--model", "ub", "--n", "7", "--cache-dir", tmp)
    second = run("records", "--model", "ub", "--n", "7", "--cache-dir", tmp)
    s = schema("records")
    lines = [json.loads(l) for l in first.splitlines()]
    try:
        for l in lines:
            jsonschema.validate(l, s)
        check("schema records", True)
    except jsonschema.ValidationError as e:
        check("schema records", False, e.message)
    check("records cache miss then hit",
          lines[0]["config"]["cache"] == "miss" and json.loads(second.splitlines()[0])["config"]["cache"] == "hit")
    check("records from cache equal fresh records", first.splitlines()[1:] == second.splitlines()[1:])
    csv = run("records", "--model", "ub", "--n", "7", "--format", "csv")
    check("records csv columns", csv.splitlines()[1] == "code_hex,n,aut,pr,weight_num,weight_den")
    check("records csv and jsonl agree on class count", len(csv.splitlines()) - 1 == len(lines))

# exit codes
run("exact", "--model", "nope", "--n", "3", expect=4)
run("exact", "--model", "labeled", "--n", "30", expect=3)
run("exact", "--D", "1,2", "--n", "3", expect=4)
run("mc", "--n", "3", "--samples", "0", expect=4)
run("frobnicate", expect=4)

if failures:
    print("\n".join(failures))
    sys.exit(1)
print("all cli checks passed")
