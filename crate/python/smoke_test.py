"""Smoke test for the Python bindings. Run after `maturin develop`."""

import json

import ab_homotopy as ab


def main():
    names = ab.builtin_names()
    assert "gerstenhaber-toy" in names, names

    report = json.loads(ab.verify_envelope("gerstenhaber-toy"))
    assert report["summary"]["fail"] == 0, report["summary"]
    ids = {r["id"] for r in report["records"]}
    assert "specialization-kappa" in ids, ids

    check = json.loads(ab.check_algebra("example2", params=["m=2"]))
    assert check["summary"]["fail"] == 0, check["summary"]

    a = ab.mutation("example4", seed=5, mutants=3)
    assert a == ab.mutation("example4", seed=5, mutants=3)
    assert json.loads(a)["summary"]["fail"] == 0

    assert ab.koszul_sign([1, 1], [1, 0]) == -1
    assert ab.koszul_sign([1, 2], [1, 0]) == 1
    terms = dict((tuple(w), c) for w, c in ab.shuffle([1, 1], [0], [1]))
    assert terms == {(0, 1): "1", (1, 0): "-1"}, terms

    try:
        ab.verify_envelope("no-such-algebra")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown algebra accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
