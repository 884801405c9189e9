#!/usr/bin/env python3
"""Convert the mutual savings bank workbook into data/bank.csv.

Accepts either the spreadsheet (sheet ``Data3`` with DEOM, AAA, Tto4, D3to4
columns) or a CSV export of the raw monthly EOM / AAA / 3-to-4 year rate
series, from which DEOM and D3to4 are derived as first differences.

    python3 tools/convert_bank.py Bank.xls data/bank.csv
    python3 tools/convert_bank.py bank_raw.csv data/bank.csv
"""

import argparse
import sys

import pandas as pd

COLUMNS = ["DEOM", "AAA", "Tto4", "D3to4"]
RAW_ALIASES = {
    "EOM": ["EOM", "eom"],
    "AAA": ["AAA", "aaa"],
    "Tto4": ["Tto4", "3to4", "ThreeFour", "X3to4", "threefour"],
}


def pick(frame, names):
    for name in names:
        if name in frame.columns:
            return frame[name].astype(float)
    raise SystemExit(f"none of the columns {names} found; have {list(frame.columns)}")


def from_raw(frame):
    eom = pick(frame, RAW_ALIASES["EOM"])
    tto4 = pick(frame, RAW_ALIASES["Tto4"])
    out = pd.DataFrame(
        {
            "DEOM": eom.diff(),
            "AAA": pick(frame, RAW_ALIASES["AAA"]),
            "Tto4": tto4,
            "D3to4": tto4.diff(),
        }
    )
    return out.iloc[1:]


def main(argv):
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("source")
    parser.add_argument("target")
    parser.add_argument("--sheet", default="Data3")
    args = parser.parse_args(argv)

    if args.source.lower().endswith((".xls", ".xlsx")):
        frame = pd.read_excel(args.source, sheet_name=args.sheet, header=0)
    else:
        frame = pd.read_csv(args.source)
    frame.columns = [str(c).strip() for c in frame.columns]

    table = frame[COLUMNS].astype(float) if set(COLUMNS) <= set(frame.columns) else from_raw(frame)
    table = table.dropna()
    table.to_csv(args.target, index=False, float_format="%.17g")
    print(f"wrote {len(table)} rows to {args.target}", file=sys.stderr)


if __name__ == "__main__":
    main(sys.argv[1:])
