"""Validates every JSON document the CLI emits against docs/schemas."""

import json
import pathlib
import subprocess
import sys

import jsonschema

COMMANDS = {
    "validate": [],
    "solve": ["--oracle", "small", "--grid", "256"],
    "allocate": [],
    "check": ["--samples", "16"],
    "check-core": ["--rule", "mpc"],
    "sweep-bbar": ["--from", "0.005", "--to", "0.3", "--steps", "4"],
}


def main() -> int:
    binary, root = sys.argv[1], pathlib.Path(sys.argv[2])
    schemas = root / "docs" / "schemas"
    situation_schema = json.loads((schemas / "situation.schema.json").read_text())
    failures = 0
    for example in sorted((root / "data").glob("example*.json")):
        jsonschema.validate(json.loads(example.read_text()), situation_schema)
        for command, extra in COMMANDS.items():
            run = subprocess.run([binary, command, "--situation", str(example), "--format", "json", *extra],
                                 capture_output=True, text=True, check=False)
            if run.returncode not in (0, 1):
                print(f"{example.name} {command}: exit {run.returncode}: {run.stderr.strip()}")
                failures += 1
                continue
            schema = json.loads((schemas / f"{command}.schema.json").read_text())
            try:
                jsonschema.validate(json.loads(run.stdout), schema)
            except jsonschema.ValidationError as e:
                print(f"{example.name} {command}: {e.message} at {list(e.absolute_path)}")
                failures += 1
    print("all documents valid" if failures == 0 else f"{failures} invalid documents")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
