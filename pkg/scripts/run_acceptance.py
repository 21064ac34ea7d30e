"""Run the acceptance suite; one PASS/FAIL line per criterion is printed at the end.

    python scripts/run_acceptance.py [-k criterion_05]
"""
import sys
from pathlib import Path

import pytest

root = Path(__file__).resolve().parents[1]
sys.exit(pytest.main([str(root / "tests/test_acceptance.py"), "-q", "-p", "no:cacheprovider", *sys.argv[1:]]))
