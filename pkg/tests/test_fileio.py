import json
from fractions import Fraction

import pytest

from pplateau.complexes import Chain, Cochain, boundary, validate
from pplateau.errors import ParseError
from pplateau.fileio import (
    emit_chain,
    emit_cochain,
    emit_complex,
    emit_integrand,
    load_chain,
    load_cochain,
    load_complex,
    load_integrand,
    parse_chain,
    parse_cochain,
    parse_complex,
    parse_integrand,
    render_output,
)
from pplateau.functionals import Integrand

from tcommon import square


# ---------------------------------------------------------------- round trips

def test_complex_round_trip():
    cx = square()
    text = emit_complex(cx)
    back = parse_complex(text)
    assert emit_complex(back) == text
    assert back.cell_names(1) == cx.cell_names(1)
    assert back.measure(2, "lower") == Fraction(1, 2)
    assert boundary(back, Chain(2, {"lower": 1, "upper": 1})) \
        == boundary(cx, Chain(2, {"lower": 1, "upper": 1}))


def test_complex_round_trip_keeps_labels_and_rationals():
    text = "\n".join([
        "pplateau-complex v1",
        "dimension 0",
        "cell v measure 1",
        "dimension 1",
        "cell e measure 7/3 crossing edge",
        "face e v 1",
    ]) + "\n"
    cx = parse_complex(text)
    assert cx.measure(1, "e") == Fraction(7, 3)
    assert cx.cells(1)[0].label == "crossing edge"
    assert emit_complex(cx) == text


def test_chain_round_trip():
    c = Chain(1, {"b": -2, "a": 3})
    assert parse_chain(emit_chain(c)) == c
    assert emit_chain(parse_chain(emit_chain(c))) == emit_chain(c)


def test_cochain_round_trip():
    phi = Cochain(0, {"x": Fraction(-5, 4), "y": Fraction(2)})
    assert parse_cochain(emit_cochain(phi)) == phi
    assert "-5/4" in emit_cochain(phi)


def test_integrand_round_trips():
    for h in (Integrand.identity(),
              Integrand.power(Fraction(1, 2)),
              Integrand.table([(0, 0), (1, 1), (3, Fraction(5, 3))])):
        back = parse_integrand(emit_integrand(h))
        assert back.kind == h.kind
        for k in range(8):
            assert back(k) == h(k)


def test_file_loaders(tmp_path):
    cx = square()
    (tmp_path / "c.cx").write_text(emit_complex(cx))
    (tmp_path / "t.chain").write_text(emit_chain(Chain(1, {"pq": 1})))
    (tmp_path / "p.cochain").write_text(emit_cochain(Cochain(0, {"p": 1})))
    (tmp_path / "h.integrand").write_text(emit_integrand(Integrand.identity()))
    assert validate(load_complex(tmp_path / "c.cx")).ok
    assert load_chain(tmp_path / "t.chain").get("pq") == 1
    assert load_cochain(tmp_path / "p.cochain").get("p") == 1
    assert load_integrand(tmp_path / "h.integrand").kind == "identity"


def test_comments_and_blanks_ignored():
    text = "\n".join([
        "# leading comment",
        "",
        "chain 1   # header trails a comment",
        "e 2",
        "   ",
        "# done",
    ])
    assert parse_chain(text) == Chain(1, {"e": 2})


# ---------------------------------------------------------------- parse errors

def bad(fn, text, needle):
    with pytest.raises(ParseError) as err:
        fn(text)
    assert needle in str(err.value), str(err.value)


def test_complex_errors_name_the_line():
    bad(parse_complex, "", "empty complex file")
    bad(parse_complex, "wrong header", "expected header")
    bad(parse_complex, "pplateau-complex v1\ncell v measure 1", "line 2")
    bad(parse_complex, "pplateau-complex v1\ndimension 0\ncell v", "line 3")
    bad(parse_complex, "pplateau-complex v1\ndimension -1", "line 2")
    bad(parse_complex, "pplateau-complex v1\ndimension 0\nface a b 1", "line 3")
    bad(parse_complex, "pplateau-complex v1\nbogus x", "unknown directive")
    bad(parse_complex,
        "pplateau-complex v1\ndimension 0\ncell v measure 1\ncell v measure 1",
        "line 4")
    bad(parse_complex,
        "pplateau-complex v1\ndimension 1\ncell e measure x",
        "line 3")


def test_valued_errors_name_the_line():
    bad(parse_chain, "", "empty chain file")
    bad(parse_chain, "cochain 1\ne 1", "expected header 'chain <dim>'")
    bad(parse_chain, "chain 1\ne", "line 2")
    bad(parse_chain, "chain 1\ne 1\ne 2", "duplicate entry")
    bad(parse_chain, "chain 1\ne 1/0", "line 2")
    bad(parse_cochain, "chain 1\ne 1", "expected header 'cochain <dim>'")


def test_integrand_errors():
    bad(parse_integrand, "", "empty integrand file")
    bad(parse_integrand, "integrand", "expected header")
    bad(parse_integrand, "integrand magic", "unknown integrand kind")
    bad(parse_integrand, "integrand identity extra", "no arguments")
    bad(parse_integrand, "integrand identity\n1 1", "no body")
    bad(parse_integrand, "integrand alpha", "one exponent")
    bad(parse_integrand, "integrand alpha 2", "")  # out-of-range exponent
    bad(parse_integrand, "integrand table\n0", "expected '<theta> <value>'")
    bad(parse_integrand, "integrand table\n0 0", "")  # single node rejected


# ---------------------------------------------------------------- output

def test_render_output_envelope():
    text = render_output("solve", {"value": Fraction(3, 2), "count": 2})
    doc = json.loads(text)
    assert doc["format"] == "pplateau-out v1"
    assert doc["command"] == "solve"
    assert doc["value"] == "3/2"
    assert doc["count"] == 2


def test_render_output_deterministic():
    payload = {"b": [Fraction(1, 3), 2], "a": {"z": Fraction(4), "y": 0}}
    one = render_output("x", dict(reversed(list(payload.items()))))
    two = render_output("x", payload)
    assert one == two
    assert one.index('"a"') < one.index('"b"')


def test_emit_is_idempotent_under_parse():
    cx = square()
    once = emit_complex(parse_complex(emit_complex(cx)))
    assert once == emit_complex(cx)
