import pytest

from green.lexer import LexError, to_float32, tokenize


def kinds(src):
    return [(t.kind, t.value if t.value is not None else t.lexeme) for t in tokenize(src) if t.kind != "eof"]


def test_numeric_suffixes():
    assert kinds("35b 2i 7L 1.5r 2.5d") == [
        ("byte", 35), ("integer", 2), ("long", 7), ("real", 1.5), ("double", 2.5)]


def test_unsuffixed_real_is_float32():
    (k, v), = kinds("0.1")
    assert k == "real"
    assert v == to_float32(0.1)
    assert kinds("1e3") == [("real", 1000.0)]


def test_integer_overflow_is_a_lex_error():
    with pytest.raises(LexError):
        tokenize("999999999999i")
    with pytest.raises(LexError):
        tokenize("2147483648")
    assert kinds("2147483647") == [("integer", 2147483647)]


def test_byte_range():
    with pytest.raises(LexError):
        tokenize("256b")


def test_nested_comments():
    assert kinds("a /* x /* y */ z */ b // tail\nc") == [("id", "a"), ("id", "b"), ("id", "c")]


def test_unterminated_comment():
    with pytest.raises(LexError):
        tokenize("a /* never closed")


def test_char_and_string_escapes():
    assert kinds(r"'\n' '\x41' '\'' " + r'"a\"b"') == [
        ("char", "\n"), ("char", "A"), ("char", "'"), ("string", 'a"b')]


def test_bad_escape():
    with pytest.raises(LexError):
        tokenize(r"'\q'")


def test_keywords_and_init_is_identifier():
    toks = tokenize("proc init subtypeOf assertion")
    assert [t.kind for t in toks if t.kind != "eof"] == ["kw", "id", "kw", "kw"]


def test_spans_track_lines():
    toks = tokenize("a\n  b")
    assert (toks[1].span.line, toks[1].span.col) == (2, 3)
