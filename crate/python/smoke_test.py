"""Smoke test for the annwb_py extension."""
import math
from pathlib import Path

import annwb_py as wb

ROOT = Path(__file__).resolve().parent.parent
SESSIONS = ROOT / "crates" / "core" / "tests" / "sessions"


def main():
    text, code = wb.run("annwb v1\nring R = QQ[x] grevlex\nideal a = <x>\ncmd gb a\n")
    assert (text, code) == ("GB a = {x}\n", 0), (text, code)

    text, code = wb.run((SESSIONS / "faltings_fail.annwb").read_text())
    assert code == 1 and "fails pair=" in text, text

    _, code = wb.run("annwb v1\nbogus\n")
    assert code == 2

    s = (SESSIONS / "posets.annwb").read_text()
    assert wb.pretty(wb.pretty(s)) == wb.pretty(s)
    try:
        wb.pretty("annwb v2\n")
    except ValueError:
        pass
    else:
        raise AssertionError("version mismatch accepted")

    assert wb.groebner_basis("QQ[x,y] grevlex", "<x*y, y^2 - x>") == ["y^2 - x", "x*y", "x^2"]
    assert wb.depth("QQ[x,y] graded", "R/<x>", "<x, y>") == 1
    assert math.isinf(wb.depth("QQ[x,y] graded", "R/<x>", "<y>"))
    assert wb.lc_bound("QQ[x,y] graded", "V<x, y>", "R^1") == 2
    assert wb.spfilt_roundtrip("{ a < b; }", 0, 2) == (0, 21)
    print("smoke test ok")


if __name__ == "__main__":
    main()
