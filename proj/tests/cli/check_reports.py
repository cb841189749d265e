"""Runs every subcommand, checks exit codes, validates reports against the
schema and checks that repeated runs give byte-identical reports."""
import json
import os
import subprocess
import sys
import tempfile

import jsonschema

cli, schema_path, registry = sys.argv[1:4]
with open(schema_path) as fh:
    schema = json.load(fh)
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)

R = ["--registry", registry]
cases = [
    (["invert", "--map", "shear3", "--target", "9,2", "--start", "0,0"], 0),
    (["invert", "--map", "expmap", "--target", "-1", "--start", "0"], 1),
    (["hadamard", "--map", "expmap", "--center", "0"], 0),
    (["hadamard", "--map", "identity(2)", "--weight", "affine:1,1", "--samples", "64"], 0),
    (["hadamard", "--map", "expmap", "--weight", "affine:1,1", "--region", "-3..3"], 1),
    (["lift", "--map", "expmap", "--path", "seg:1,0", "--start", "0"], 1),
    (["lift", "--map", "shear3", "--path", "seg:0,0;9,2", "--start", "0,0", "--weight", "const:1"], 0),
    (["deriv", "--map", "shear3", "--at", "0,1"], 0),
    (["deriv", "--map", "polar_exp", "--at", "0.3,1", "--method", "shell", "--surjection"], 0),
    (["length", "--path", "poly:0,0;1,2;3,1", "--reparam", "9"], 0),
    (["meanvalue", "--map", "x^2", "--path", "seg:0,1"], 0),
    (["fiber", "--map", "powk(2)", "--target", "1,0", "--region", "-2,-2..2,2", "--starts", "64"], 0),
    (["sheets", "--map", "powk(3)", "--target", "1,0", "--loop", "loop:0,0,1", "--start", "1,0"], 0),
    (["sheets", "--map", "polar_exp", "--target", "1,0", "--loop", "loop:0,0,1", "--start", "0,0"], 0),
    (["qi", "--map", "shear3", "--region", "-1,-1..1,1", "--samples", "100"], 0),
    (["implicit", "--map", "cubic_implicit", "--path", "seg:0,2", "--y0", "0", "--weight", "affine:1,1"], 0),
    (["implicit", "--problem", "fold", "--mode", "eval", "--x0", "0", "--y0", "1", "--target", "-1"] + R, 1),
    (["implicit", "--problem", "kepler", "--mode", "branches", "--grid", "0;1;2"] + R, 0),
    (["registry", "list"] + R, 0),
    (["registry", "validate"] + R, 0),
    (["lift", "--map", "twist", "--path", "diagonal", "--start", "0,0"] + R, 0),
]
usage_errors = [
    ["frobnicate"],
    ["invert", "--map", "shear3"],
    ["invert", "--map", "nosuchmap", "--target", "1,1", "--start", "0,0"],
    ["deriv", "--map", "shear3", "--at", "1,2,3"],
    ["lift", "--map", "shear3", "--path", "seg:0,0;1,1", "--start", "5,5"],
    ["deriv", "--map", "shear3", "--at", "0,0", "--bogus-flag"],
    ["registry", "validate"],
]

failures = []


def run(args, out_dir=None):
    argv = [cli] + args + ["--json", "--seed", "3"]
    if out_dir:
        argv += ["--out", out_dir]
    return subprocess.run(argv, capture_output=True, text=True)


with tempfile.TemporaryDirectory() as tmp:
    for i, (args, want) in enumerate(cases):
        label = " ".join(args)
        out_dir = os.path.join(tmp, str(i))
        first = run(args, out_dir)
        if first.returncode != want:
            failures.append(f"{label}: exit {first.returncode}, expected {want}: {first.stderr.strip()}")
            continue
        doc = json.loads(first.stdout)
        errors = sorted(validator.iter_errors(doc), key=str)
        if errors:
            failures.append(f"{label}: schema: {errors[0].message}")
        with open(os.path.join(out_dir, "report.json")) as fh:
            on_disk = json.load(fh)
        for name in on_disk.get("files", []):
            if not os.path.isfile(os.path.join(out_dir, name)):
                failures.append(f"{label}: missing companion file {name}")
        second = run(args, out_dir + "_again")
        strip = lambda d: {k: v for k, v in d.items() if k != "tool_version"}
        if first.stdout.replace(doc["tool_version"], "") != second.stdout.replace(doc["tool_version"], ""):
            failures.append(f"{label}: reports differ between runs")
        if strip(doc) != strip(json.loads(second.stdout)):
            failures.append(f"{label}: report contents differ between runs")
    for args in usage_errors:
        res = run(args)
        if res.returncode != 2 or not res.stderr:
            failures.append(f"{' '.join(args)}: exit {res.returncode}, expected 2 with a message")

for f in failures:
    print("FAIL", f)
print(f"{len(cases) + len(usage_errors) - len(failures)}/{len(cases) + len(usage_errors)} CLI checks passed")
sys.exit(1 if failures else 0)
