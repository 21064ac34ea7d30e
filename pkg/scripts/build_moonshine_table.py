"""Write the stored j-coefficient table (q^-1 .. q^N) used for moonshine graded dimensions."""
import json
import sys
from pathlib import Path

from voapart.moonshine import j_eta_quotient

N = int(sys.argv[1]) if len(sys.argv) > 1 else 14
out = Path(__file__).resolve().parents[1] / "src/voapart/data/j_coefficients.json"
coeffs = [1] + j_eta_quotient(N)
out.write_text(json.dumps({"description": "j(q) coefficients from q^-1 upward", "coefficients": [str(c) for c in coeffs]}, indent=1) + "\n")
print(out, coeffs[:4])
