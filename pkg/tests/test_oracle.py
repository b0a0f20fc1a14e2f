import random
from fractions import Fraction

from regdist.oracle import LanguageSlice, brute_distance, brute_witness, denote
from regdist.syntax import parse

from conftest import rand_expr


def test_denote_star():
    lang = denote(parse("a*"), ("a", "b"), 4)
    assert list(lang.words()) == ["", "a", "aa", "aaa", "aaaa"]
    assert lang.member("aaa")
    assert not lang.member("ab")


def test_denote_constants():
    assert list(denote(parse("0"), ("a",), 3).words()) == []
    assert list(denote(parse("1"), ("a",), 3).words()) == [""]


def test_denote_concat_and_sum():
    lang = denote(parse("(a+b);b"), ("a", "b"), 3)
    assert list(lang.words()) == ["ab", "bb"]
    lang = denote(parse("a;b + 1"), ("a", "b"), 2)
    assert list(lang.words()) == ["", "ab"]


def test_denote_star_of_two_letter_blocks():
    lang = denote(parse("(ab)*"), ("a", "b"), 6)
    assert list(lang.words()) == ["", "ab", "abab", "ababab"]


def test_words_come_out_shortest_first_then_lexicographic():
    rng = random.Random(3)
    for _ in range(60):
        e = rand_expr(rng, rng.randint(1, 9))
        words = list(denote(e, ("a", "b"), 5).words())
        assert words == sorted(words, key=lambda w: (len(w), w))
        assert len(set(words)) == len(words)


def test_member_respects_alphabet_positions():
    lang = denote(parse("b"), ("a", "b"), 2)
    assert lang.member("b")
    assert not lang.member("a")
    assert not lang.member("")


def test_slice_equality_is_structural():
    a = denote(parse("a + a"), ("a",), 4)
    b = denote(parse("a"), ("a",), 4)
    assert a == b
    assert isinstance(a, LanguageSlice)


def test_brute_witness_finds_the_least_difference():
    assert brute_witness(parse("a*"), parse("a+1"), ("a",), 6) == "aa"
    assert brute_witness(parse("a*"), parse("0"), ("a",), 6) == ""
    assert brute_witness(parse("a"), parse("b"), ("a", "b"), 6) == "a"
    assert brute_witness(parse("a*"), parse("a*"), ("a",), 6) is None
    # ties are broken toward the alphabet order
    assert brute_witness(parse("ab"), parse("ba"), ("a", "b"), 6) == "ab"


def test_brute_distance_values():
    half = Fraction(1, 2)
    assert brute_distance(parse("a*"), parse("a+1"), ("a",), 6, half) == Fraction(1, 4)
    assert brute_distance(parse("a*"), parse("0"), ("a",), 6, half) == 1
    assert brute_distance(parse("a"), parse("b"), ("a", "b"), 6, half) == half
    assert brute_distance(parse("a"), parse("a"), ("a",), 6, half) == 0
    assert brute_distance(parse("a*"), parse("a+1"), ("a",), 6, Fraction(1, 3)) == Fraction(1, 9)


def test_brute_distance_sees_no_difference_beyond_the_horizon():
    # identical up to length 2; the horizon hides the longer separating word
    e, f = parse("a;a;a"), parse("0")
    assert brute_distance(e, f, ("a",), 2, Fraction(1, 2)) == 0
    assert brute_distance(e, f, ("a",), 3, Fraction(1, 2)) == Fraction(1, 8)
