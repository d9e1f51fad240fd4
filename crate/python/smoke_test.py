"""Smoke test for the `skein` extension module.

Uses an installed `skein` if there is one, otherwise the library built by
`cargo build -p skein-py --release`.
"""

import importlib.util
import json
import pathlib
import shutil
import sys
import tempfile


def load():
    try:
        import skein

        return skein
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for profile in ("release", "debug"):
        lib = root / "target" / profile / "libskein.so"
        if lib.exists():
            tmp = pathlib.Path(tempfile.mkdtemp()) / "skein.so"
            shutil.copy(lib, tmp)
            found = importlib.util.spec_from_file_location("skein", tmp)
            mod = importlib.util.module_from_spec(found)
            found.loader.exec_module(mod)
            return mod
    sys.exit("skein extension not found; run `cargo build -p skein-py --release` first")


def main():
    sk = load()
    S = sk.Scalar

    assert str(S.brace(1)) == str(S.s(1) - S.s(-1))
    assert (S.brace(2) / S.brace(1)) == S.s(1) + S.s(-1)
    assert S.qbinom(-1, 3) == S(-1)
    assert json.loads(S.q(2).to_json()) is not None
    assert S.from_json(S.q(2).to_json()) == S.q(2)

    hooks, contents, kappa = sk.hook_data([2, 1])
    assert sorted(hooks) == [1, 1, 3] and sorted(contents) == [-1, 0, 1] and kappa == 0
    assert sk.topological_vertex([1], 0) == S(1) / S.brace(1)
    rows = sk.wavefunction_framed(0, 3)
    assert len(rows) == 7 and rows[0][0] == []

    assert sk.act(0, 1, []) == [([1], S(1))]
    terms = dict((tuple(map(tuple, w)), c) for w, c in sk.normal_order_word([[0, 1], [1, 0]]))
    assert terms[((1, 1),)] == -S.brace(1)

    assert sk.pentagon([1, 0], [0, 1], 4) == (True, None)
    ok, fail = sk.pentagon([1, 0], [0, 1], 3, "reversed")
    assert not ok and fail == [1, 1]

    cvecs, signs = sk.cvec_sequence([[0, 1], [-1, 0]], [1, 2, 1, 2, 1])
    assert cvecs == [[0, 1], [1, 0]] and len(signs) == 5

    for name in ("canoe", "unknot", "qt-pentagon", "dmod", "uv-pentagon"):
        assert sk.check(name, 3), name
    assert not sk.check("cvec-pentagon", 3)

    code, out, _ = sk.run_cli(["pentagon", "--json"])
    assert code == 0 and json.loads(out)["pass"]
    code, _, _ = sk.run_cli(["vertex", "--no-such-flag"])
    assert code == 2

    print("smoke test passed")


if __name__ == "__main__":
    main()
