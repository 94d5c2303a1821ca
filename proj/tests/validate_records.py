#!/usr/bin/env python3
"""Run a handful of quick CLI commands and validate every record against the schema."""
import json
import subprocess
import sys

try:
    import jsonschema
except ImportError:
    print("jsonschema not installed; skipping")
    sys.exit(77)

COMMANDS = [
    ["constants", "--d-max", "4"],
    ["ctheta", "--m", "1", "--n", "3", "--grid", "0.01"],
    ["c3-bound", "--grid", "0.05", "--threshold", "1.5"],
    ["free-norms", "--N", "40", "--trials", "2"],
    ["arcsine", "--N", "40"],
    ["lehner", "--N", "40", "--coefficient-trials", "2"],
    ["weyl-verify", "--pairs", "2", "--cutoff", "6", "--commutation-cutoff", "8", "--max-residual", "1",
     "--max-commutation", "1"],
    ["mrange-audit", "--pairs", "0/1:1/3", "--resolution", "0.1", "--phase-grid", "0.1"],
    ["l1-ball", "--family", "commuting", "--d", "2"],
    ["extend-path", "--oracle", "faber", "--eps", "1e-4", "--audit-samples", "50"],
]


def main():
    cli, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as f:
        schema = json.load(f)
    validator = jsonschema.validators.validator_for(schema)(schema)
    failures = 0
    for args in COMMANDS:
        proc = subprocess.run([cli, *args], capture_output=True, text=True)
        lines = [l for l in proc.stdout.splitlines() if l.strip()]
        if proc.returncode != 0 or not lines:
            print(f"FAIL {args[0]}: exit {proc.returncode}\n{proc.stderr}")
            failures += 1
            continue
        for line in lines:
            errors = list(validator.iter_errors(json.loads(line)))
            for e in errors:
                print(f"FAIL {args[0]}: {e.message}")
            failures += bool(errors)
        print(f"ok   {args[0]} ({len(lines)} records)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
