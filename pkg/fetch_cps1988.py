#!/usr/bin/env python3
"""
Download the CPS1988 wage extract used by the urban/suburban comparison.

The table (28,155 men, March 1988 Current Population Survey) is published
with the AER R package and mirrored as CSV by the Rdatasets project. Only the
wage and smsa columns are kept; no rows are filtered.

    python fetch_cps1988.py            # writes to SHARE_CPS1988_PATH
    python fetch_cps1988.py out.csv
"""

from pathlib import Path

import pandas as pd

from dotenv import load_dotenv
load_dotenv()

import sys
sys.path.insert(0, str(Path(__file__).parent))

from src.config import Settings

SOURCE_URL = "https://vincentarelbundock.github.io/Rdatasets/csv/AER/CPS1988.csv"
COLUMNS = ["wage", "smsa"]
EXPECTED_ROWS = 28155


def main():
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Settings.from_env().cps1988_path

    print(f"📦 Fetching {SOURCE_URL}")
    try:
        frame = pd.read_csv(SOURCE_URL, usecols=COLUMNS)
    except Exception as e:
        print(f"❌ Download failed: {e}")
        return False

    if len(frame) != EXPECTED_ROWS:
        print(f"⚠️  Expected {EXPECTED_ROWS} rows, got {len(frame)}")

    target.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(target, index=False)

    counts = frame["smsa"].value_counts()
    print(f"✓ Saved {len(frame)} rows to {target}")
    for group, count in counts.items():
        print(f"   smsa={group}: {count}")
    return True


if __name__ == "__main__":
    success = main()
    exit(0 if success else 1)
