"""The command-line pipeline end to end, run in a temporary directory.

Equivalent shell session:
    hsghs simulate --n 40 --p 10 --q 3 --seed 1 --out-dir data
    hsghs fit --x data/X.csv --y data/Y.csv --burnin 200 --nmc 500 \
        --out-samples fit/samples.hsgs --out-summary fit/summary.json
    hsghs summarize --samples fit/samples.hsgs --out-dir est
    hsghs metrics --truth-dir data --estimate-dir est --test-dir data --out est/metrics.json
    hsghs roc --samples fit/samples.hsgs --truth-dir data --out-dir roc
    hsghs replay fit/manifest.json --out-dir again
"""
import json
import tempfile
from pathlib import Path

from hsghs.cli import main

with tempfile.TemporaryDirectory() as tmp:
    d = Path(tmp)
    steps = [
        ["simulate", "--n", "40", "--p", "10", "--q", "3", "--seed", "1",
         "--out-dir", str(d / "data")],
        ["fit", "--x", str(d / "data/X.csv"), "--y", str(d / "data/Y.csv"),
         "--burnin", "200", "--nmc", "500",
         "--out-samples", str(d / "fit/samples.hsgs"), "--out-summary", str(d / "fit/summary.json")],
        ["summarize", "--samples", str(d / "fit/samples.hsgs"), "--out-dir", str(d / "est")],
        ["metrics", "--truth-dir", str(d / "data"), "--estimate-dir", str(d / "est"),
         "--test-dir", str(d / "data"), "--out", str(d / "est/metrics.json")],
        ["roc", "--samples", str(d / "fit/samples.hsgs"), "--truth-dir", str(d / "data"),
         "--out-dir", str(d / "roc")],
        ["replay", str(d / "fit/manifest.json"), "--out-dir", str(d / "again")],
    ]
    for argv in steps:
        print("hsghs", argv[0], "->", main(argv))

    print(json.loads((d / "est/metrics.json").read_text()))
    same = (d / "fit/samples.hsgs").read_bytes() == (d / "again/samples.hsgs").read_bytes()
    print("replay byte-identical:", same)
