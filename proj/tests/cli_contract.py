#!/usr/bin/env python3
"""Exit codes, stream discipline and a few outputs of the qfano command."""

import json
import pathlib
import shutil
import subprocess
import sys
import tempfile

EXE = sys.argv[1]
failures = 0


def run(*args):
    return subprocess.run([EXE, *args], capture_output=True, text=True)


def expect(label, proc, code, stdout=None, contains=None, stderr_lines=None):
    global failures
    problems = []
    if proc.returncode != code:
        problems.append(f"exit {proc.returncode}, want {code}")
    if stdout is not None and proc.stdout != stdout:
        problems.append(f"stdout {proc.stdout!r}, want {stdout!r}")
    if contains is not None and contains not in proc.stdout:
        problems.append(f"stdout lacks {contains!r}")
    if code == 2:
        if proc.stdout:
            problems.append("usage error wrote to stdout")
        if not proc.stderr.strip():
            problems.append("usage error without a message")
    if stderr_lines is not None and len(proc.stderr.strip().splitlines()) > stderr_lines:
        problems.append(f"stderr has more than {stderr_lines} lines: {proc.stderr!r}")
    if problems:
        failures += 1
        print(f"FAIL {label}: " + "; ".join(problems))
    else:
        print(f"ok   {label}")


expect("chi at t = 0", run("chi", "--q", "4", "--basket", "7:2,13:6", "--t", "0"), 0, stdout="1\n")
expect("chi at t = -1", run("chi", "--q", "4", "--basket", "7:2,13:6", "--t", "-1"), 0, stdout="0\n")
expect("chi at t = 2", run("chi", "--q", "4", "--basket", "7:2,13:6", "--t", "2"), 0, stdout="2\n")
expect("dims", run("dims", "--q", "8", "--basket", "3:1,5:2,11:4", "--kmax", "6"), 0,
       contains="dim|kA|, k = 1..6: -1 0 0 1 2 3")
expect("index-only basket reports every twist", run("chi", "--q", "4", "--basket", "7,13", "--t", "0"), 0,
       contains="7:3,13:6 t=0 1")
expect("help", run("--help"), 0)

expect("unknown flag", run("chi", "--q", "4", "--basket", "7:2", "--t", "0", "--colour"), 2)
expect("unknown subcommand", run("frobnicate"), 2)
expect("no subcommand", run(), 2)
expect("missing required flag", run("chi", "--q", "4"), 2)
expect("malformed basket", run("chi", "--q", "4", "--basket", "7:x", "--t", "0"), 2, stderr_lines=1)
expect("invalid point", run("chi", "--q", "4", "--basket", "8:2", "--t", "0"), 2, stderr_lines=1)
expect("invalid rational", run("enumerate", "--bx-min", "1/0"), 2, stderr_lines=1)
expect("index outside the Fano set", run("enumerate", "--q-set", "10"), 2, stderr_lines=1)
expect("unknown table", run("verify", "--table", "A9"), 2)
expect("bad format", run("export", "--table", "A1", "--format", "xml"), 2)
expect("missing fixture dir", run("--fixtures", "/nonexistent", "export", "--table", "A1"), 2, stderr_lines=1)
expect("centre not in basket", run("sarkisov", "--q", "4", "--basket", "7:2,13:6", "--center", "index:5",
                                   "--movable", "3"), 2, stderr_lines=1)
expect("ambiguous basket for sarkisov", run("sarkisov", "--q", "4", "--basket", "7,13", "--center", "index:13",
                                            "--movable", "3"), 2, stderr_lines=1)
expect("curve centre away from k0", run("sarkisov", "--q", "4", "--basket", "7:2,13:6", "--center", "curve",
                                        "--movable", "3", "--drive-k", "2"), 2, stderr_lines=1)

expect("verify A1", run("verify", "--table", "A1"), 0, contains="Matched 31, missing 0, surplus 0.")
expect("verify L2.2", run("verify", "--table", "L2.2"), 0, contains="Matched 4, missing 0, surplus 0.")

p = run("sarkisov", "--q", "4", "--basket", "7:2,13:6", "--center", "index:13", "--movable", "3", "--drive-k", "3")
expect("sarkisov json", p, 0)
if p.returncode == 0:
    fams = [f["label"] for f in json.loads(p.stdout)["families"]]
    if len(fams) != 5:
        failures += 1
        print(f"FAIL five families: {fams}")
    else:
        print("ok   five families")

# A fixture that disagrees with the computation must give exit 1.
with tempfile.TemporaryDirectory() as tmp:
    src = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
    for f in src.glob("*.json"):
        shutil.copy(f, tmp)
    a1 = pathlib.Path(tmp) / "A1.json"
    doc = json.loads(a1.read_text())
    doc["rows"][0]["dims"][8] += 1
    a1.write_text(json.dumps(doc))
    p = run("--fixtures", tmp, "verify", "--table", "A1")
    expect("tampered A1 is a mismatch", p, 1, contains="missing 1")
    p = run("verify", "--table", "A1", "--fixtures", tmp, "--format", "json")
    expect("tampered A1, json, flag after subcommand", p, 1)

sys.exit(1 if failures else 0)
