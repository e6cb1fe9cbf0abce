#!/usr/bin/env python3
"""Validate qcircle JSON outputs against the schemas shipped in schemas/.

usage: validate_reports.py SCHEMA_DIR FILE...

The schema is chosen from the document's "schema" field.
"""
import json
import sys
from pathlib import Path

import jsonschema

SCHEMAS = {
    "qcircle.report/1": "report.schema.json",
    "qcircle.theorem1/1": "theorem1.schema.json",
    "qcircle.theorem2/1": "theorem2.schema.json",
    "qcircle.selftest/1": "selftest.schema.json",
}


def main(argv):
    if len(argv) < 3:
        print(__doc__, file=sys.stderr)
        return 2
    schema_dir = Path(argv[1])
    failed = 0
    for name in argv[2:]:
        doc = json.loads(Path(name).read_text())
        kind = doc.get("schema")
        if kind not in SCHEMAS:
            print(f"FAIL {name}: unknown schema tag {kind!r}")
            failed += 1
            continue
        schema = json.loads((schema_dir / SCHEMAS[kind]).read_text())
        jsonschema.Draft7Validator.check_schema(schema)
        errors = sorted(jsonschema.Draft7Validator(schema).iter_errors(doc), key=lambda e: list(e.path))
        if errors:
            failed += 1
            for e in errors:
                print(f"FAIL {name}: {'/'.join(map(str, e.path))}: {e.message}")
        else:
            print(f"ok   {name} ({kind})")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
