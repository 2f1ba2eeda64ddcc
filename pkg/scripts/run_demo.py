#!/usr/bin/env python3
"""Run the end-to-end demo into a fresh directory and print the metrics.

Usage: python3 scripts/run_demo.py [--seed 42] [--data-dir /tmp/og-demo]
"""

import argparse
import sys
import tempfile

from og.cli import main as og_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--data-dir", help="target directory (default: fresh tempdir)")
    parser.add_argument("--objects", type=int, default=10)
    parser.add_argument("--duration", type=int, default=86400)
    args = parser.parse_args()

    data_dir = args.data_dir or tempfile.mkdtemp(prefix="og-demo-")
    print(f"data dir: {data_dir}")
    return og_main([
        "--data-dir", data_dir, "--json", "demo_end_to_end",
        "--seed", str(args.seed),
        "--objects", str(args.objects),
        "--duration", str(args.duration),
    ])


if __name__ == "__main__":
    sys.exit(main())
