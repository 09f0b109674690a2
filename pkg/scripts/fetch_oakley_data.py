"""Write the Oakley & O'Hagan (2004) coefficients as the 18x15 CSV read by ``load_oo_data``.

The coefficients are not shipped with the package.  Sources, tried in order:

1. ``--from-text FILE``: Jeremy Oakley's ``psa_example.txt`` (a1, a2, a3 then M,
   whitespace separated), downloaded by hand;
2. ``--url``: the same file fetched over HTTP;
3. ``--from-salib``: the literal arrays in ``SALib/test_functions/oakley2004.py``
   from an installed SALib or a downloaded SALib wheel (``--salib-wheel``).

Usage::

    python scripts/fetch_oakley_data.py --from-salib --out data/oakley_ohagan.csv
"""

import argparse
import ast
import sys
import urllib.request
import zipfile
from pathlib import Path

import numpy as np

OAKLEY_URL = "http://www.jeremy-oakley.staff.shef.ac.uk/psa_example.txt"
SALIB_MODULE = "SALib/test_functions/oakley2004.py"


def parse_text(text):
    values = np.array([float(v) for v in text.replace(",", " ").split()])
    if values.size != 3 * 15 + 15 * 15:
        raise ValueError(f"expected 270 numbers, found {values.size}")
    return values[:45].reshape(3, 15), values[45:].reshape(15, 15)


def _salib_source(wheel):
    if wheel:
        with zipfile.ZipFile(wheel) as zf:
            return zf.read(SALIB_MODULE).decode("utf-8")
    import importlib.util

    spec = importlib.util.find_spec("SALib.test_functions.oakley2004")
    if spec is None:
        raise RuntimeError("SALib is not installed; pass --salib-wheel")
    return Path(spec.origin).read_text(encoding="utf-8")


def parse_salib(source):
    arrays = {}
    for node in ast.walk(ast.parse(source)):
        if isinstance(node, ast.Assign) and len(node.targets) == 1:
            name = getattr(node.targets[0], "id", None)
            if name in ("M", "A"):
                call = node.value
                # M = np.array([...]).reshape(15, 15); A = np.array([[...], ...])
                while isinstance(call, ast.Call) and not (
                    isinstance(call.func, ast.Attribute) and call.func.attr == "array"
                ):
                    call = call.func.value
                arrays[name] = np.array(ast.literal_eval(call.args[0]), dtype=float)
    if set(arrays) != {"M", "A"}:
        raise ValueError("could not locate the A and M arrays in the SALib source")
    return arrays["A"].reshape(3, 15), arrays["M"].reshape(15, 15)


def write_csv(a, m, out):
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    rows = list(a) + list(m)
    out.write_text("".join(",".join(repr(float(v)) for v in r) + "\n" for r in rows),
                   encoding="utf-8", newline="\n")
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--from-text", metavar="FILE")
    src.add_argument("--url", nargs="?", const=OAKLEY_URL)
    src.add_argument("--from-salib", action="store_true")
    ap.add_argument("--salib-wheel", metavar="WHL")
    ap.add_argument("--out", default="data/oakley_ohagan.csv")
    args = ap.parse_args(argv)

    if args.from_text:
        a, m = parse_text(Path(args.from_text).read_text(encoding="utf-8"))
    elif args.url:
        with urllib.request.urlopen(args.url, timeout=30) as resp:
            a, m = parse_text(resp.read().decode("utf-8"))
    else:
        a, m = parse_salib(_salib_source(args.salib_wheel))
    print(f"wrote {write_csv(a, m, args.out)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
