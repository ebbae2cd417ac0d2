"""Rewrite tests/golden/*.txt from the current CLI; review the diff by hand."""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from clicases import GOLDEN, GOLDEN_DIR, run_cli  # noqa: E402

for name, argv in sorted(GOLDEN.items()):
    code, out, err = run_cli(argv)
    if code:
        sys.exit(f"{name}: exit {code}: {err}")
    (GOLDEN_DIR / f"{name}.txt").write_text(out, encoding="utf-8")
    print("wrote", name)
