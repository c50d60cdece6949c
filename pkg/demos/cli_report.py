"""
Driving the command-line tool from Python
=========================================

Runs two subcommands through ``main`` and reads the JSON reports back.
"""
import contextlib
import io
import json

from desitter_dirac.cli import main

buf = io.StringIO()
with contextlib.redirect_stdout(buf):
    code = main(["spectrum", "--m", "1", "--n-max", "3"])
rep = json.loads(buf.getvalue())
print("exit code", code)
for row in rep["rows"]:
    print(row["n"], row["oracle"], row["gap_error"])

buf = io.StringIO()
with contextlib.redirect_stdout(buf):
    code = main(["verify", "all"])
summary = json.loads(buf.getvalue())["summary"]
print("verify all:", code, summary)
