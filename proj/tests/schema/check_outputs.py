"""Runs the command line tool and validates every JSON output against docs/."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

cli, docs = sys.argv[1], pathlib.Path(sys.argv[2])


def schema(name):
    return json.loads((docs / name).read_text())


def run(*args, expect=0):
    proc = subprocess.run([cli, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        sys.exit(f"{args}: exit {proc.returncode}, expected {expect}\n{proc.stderr}")
    return json.loads(proc.stdout)


checks = [
    ("pattern_set", run("gen", "fe", "2", "3")),
    ("pattern_set", run("gen", "fep", "2", "3", "2", "--weight", "2")),
    ("pattern_set", run("gen", "shape", "--edges", "1-2,2-3,2-4", "x1", "x2", "x3", "x4")),
    ("colours", run("colour", "logstar:r=1", "2", "4", "16", "2^2^2^2^2")),
    ("certificate", run("verify", "const:k=1", "exptriple", "--bound", "16", expect=1)),
    ("certificate", run("verify", "logstar:r=1", "exptriple-logcond", "--bound", "65536", "--timing")),
    ("ramsey", run("ramsey", "exptriple", "--k", "2")),
    ("ramsey", run("ramsey", "vdw", "--k", "2", "--len", "3")),
    ("ramsey", run("ramsey", "vdw", "--k", "2", "--len", "3", "--nmax", "5", expect=3)),
]

with tempfile.TemporaryDirectory() as tmp:
    table = pathlib.Path(tmp) / "table.json"
    table.write_text(json.dumps({"k": 2, "map": [1, 2, 1, 2]}))
    jsonschema.validate(json.loads(table.read_text()), schema("table_colouring.schema.json"))
    checks.append(("colours", run("colour", f"table:{table}", "1", "4")))
    weight = pathlib.Path(tmp) / "weight.json"
    weight.write_text(json.dumps({"[]": 2, "[3]": 1, "*": 1}))
    jsonschema.validate(json.loads(weight.read_text()), schema("weight.schema.json"))
    checks.append(("pattern_set", run("gen", "fep", "2", "3", "--weight", str(weight))))

for name, doc in checks:
    jsonschema.validate(doc, schema(f"{name}.schema.json"))
print(f"{len(checks)} outputs conform")
