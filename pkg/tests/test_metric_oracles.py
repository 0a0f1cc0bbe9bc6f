"""Lexical metrics against the independent reference implementations."""

import math
import os
import random
import subprocess
import sys

import numpy as np
import pytest

import oracles
from note_forge.metrics import _kernels, bleu, lcs_length, meteor, rouge_l, rouge_n, stem, tokenize

ALPHABET = ["a", "b", "c", "d", "e"]


def random_pair(rng, pool=ALPHABET, max_len=8):
    return ([rng.choice(pool) for _ in range(rng.randrange(0, max_len + 1))],
            [rng.choice(pool) for _ in range(rng.randrange(0, max_len + 1))])


# --- tokenizer --------------------------------------------------------------

def test_tokenize_lowercases_and_strips_punctuation():
    assert tokenize("The PT was stable; HR 88, afebrile.") == \
        ["the", "pt", "was", "stable", "hr", "88", "afebrile"]


def test_tokenize_empty():
    assert tokenize("") == []
    assert tokenize("...---...") == []


# --- hand-computed vectors --------------------------------------------------

def test_rouge_1_vector():
    score = rouge_n("the cat sat on the mat", "the cat ate", 1)
    assert score.precision == pytest.approx(2 / 3, abs=1e-12)
    assert score.recall == pytest.approx(2 / 6, abs=1e-12)


def test_rouge_identical_is_perfect():
    for n in (1, 2):
        score = rouge_n("a b c d", "a b c d", n)
        assert (score.precision, score.recall, score.f1) == (1.0, 1.0, 1.0)
    score = rouge_l("a b c d", "a b c d")
    assert score.f1 == 1.0


def test_rouge_disjoint_is_zero():
    score = rouge_n("a b c", "x y z", 1)
    assert (score.precision, score.recall, score.f1) == (0.0, 0.0, 0.0)


def test_rouge_l_vector():
    score = rouge_l("a b c d", "a c d")
    assert score.precision == pytest.approx(1.0, abs=1e-12)
    assert score.recall == pytest.approx(0.75, abs=1e-12)


def test_rouge_empty_sides():
    assert rouge_n("", "a b", 1) == rouge_n("", "a b", 1)
    assert rouge_n("", "a b", 1).f1 == 0.0
    assert rouge_l("a b", "").f1 == 0.0


def test_bleu_identical_short_pair_is_one():
    # orders above the hypothesis length must be skipped, not zero-padded
    assert bleu("a b", "a b") == pytest.approx(1.0, abs=1e-12)


def test_bleu_perfect_half_length_prefix():
    assert bleu("a b c d", "a b") == pytest.approx(math.exp(-1.0), abs=1e-12)


def test_bleu_degenerate_repetition_scores_near_zero():
    score = bleu("the cat is on the mat", "the the the the the the the")
    assert 0.0 < score < 1e-5


def test_bleu_empty_hypothesis_is_zero():
    assert bleu("a b c", "") == 0.0


def test_meteor_identical():
    assert meteor("a b c", "a b c") == pytest.approx(1.0 - 0.5 / 27, abs=1e-12)


def test_meteor_fully_scrambled():
    # all three words match but no two stay adjacent: three chunks
    assert meteor("the cat sat on", "cat the sat") == \
        pytest.approx((7.5 / 9.75) * 0.5, abs=1e-12)


def test_meteor_stemmed_stage_matches_inflections():
    score = meteor("he was walking home", "he was walked home")
    assert score == pytest.approx(1.0 - 0.5 * (1 / 4) ** 3, abs=1e-12)


def test_meteor_no_overlap_is_zero():
    assert meteor("abc def", "xyz uvw") == 0.0
    assert meteor("", "abc") == 0.0


# --- random equivalence against the oracles ---------------------------------

def test_lexical_metrics_match_oracles_on_random_pairs():
    rng = random.Random(99)
    for _ in range(200):
        ref, hyp = random_pair(rng)
        for n in (1, 2):
            mine = rouge_n(ref, hyp, n)
            want = oracles.rouge_n_ref(ref, hyp, n)
            assert mine.precision == pytest.approx(want[0], abs=1e-12)
            assert mine.recall == pytest.approx(want[1], abs=1e-12)
            assert mine.f1 == pytest.approx(want[2], abs=1e-12)
        mine_l = rouge_l(ref, hyp)
        want_l = oracles.rouge_l_ref(ref, hyp)
        assert mine_l.f1 == pytest.approx(want_l[2], abs=1e-12)
        assert bleu(ref, hyp) == pytest.approx(oracles.bleu_ref(ref, hyp), abs=1e-12)
        assert meteor(ref, hyp) == pytest.approx(
            oracles.meteor_ref(ref, hyp, stem=stem), abs=1e-12)


def test_meteor_matches_oracle_with_inflected_pool():
    pool = ["walk", "walking", "walked", "run", "jump", "jumped"]
    rng = random.Random(4242)
    for _ in range(60):
        ref, hyp = random_pair(rng, pool=pool, max_len=6)
        assert meteor(ref, hyp) == pytest.approx(
            oracles.meteor_ref(ref, hyp, stem=stem), abs=1e-12)


def test_meteor_long_inputs_stay_bounded():
    rng = random.Random(5)
    for _ in range(20):
        ref = [rng.choice(ALPHABET) for _ in range(40)]
        hyp = [rng.choice(ALPHABET) for _ in range(35)]
        assert 0.0 <= meteor(ref, hyp) <= 1.0


# --- kernels ----------------------------------------------------------------

def test_lcs_kernel_backends_agree_with_oracle():
    rng = random.Random(7)
    for _ in range(120):
        a = [rng.randrange(0, 6) for _ in range(rng.randrange(0, 30))]
        b = [rng.randrange(0, 6) for _ in range(rng.randrange(0, 30))]
        want = oracles.lcs_length_ref(a, b)
        a_arr = np.array(a, dtype=np.int64)
        b_arr = np.array(b, dtype=np.int64)
        assert _kernels.lcs_length_numpy(a_arr, b_arr) == want
        if _kernels.lcs_length_numba is not None:
            assert _kernels.lcs_length_numba(a_arr, b_arr) == want


def test_pairwise_max_backends_agree():
    rng = np.random.default_rng(11)
    for _ in range(30):
        ref = rng.normal(size=(rng.integers(1, 12), 8))
        hyp = rng.normal(size=(rng.integers(1, 12), 8))
        row_np, col_np = _kernels.pairwise_max_numpy(ref, hyp)
        if _kernels.pairwise_max_numba is not None:
            row_nb, col_nb = _kernels.pairwise_max_numba(ref, hyp)
            np.testing.assert_allclose(row_nb, row_np, atol=1e-12)
            np.testing.assert_allclose(col_nb, col_np, atol=1e-12)


def test_lcs_via_text_api():
    assert lcs_length("a b c d", "a c d") == 3
    assert lcs_length("", "a") == 0


def test_pure_numpy_env_flag_selects_fallback():
    code = "from note_forge.metrics import USING_NUMBA; print(USING_NUMBA)"
    env = dict(os.environ, **{_kernels.PURE_NUMPY_ENV: "1"})
    forced = subprocess.run([sys.executable, "-c", code], env=env,
                            capture_output=True, text=True, check=True)
    assert forced.stdout.strip() == "False"

    env.pop(_kernels.PURE_NUMPY_ENV)
    default = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
    assert default.stdout.strip() == "True"


# --- stemmer ----------------------------------------------------------------

STEM_VECTORS = [
    ("caresses", "caress"), ("ponies", "poni"), ("ties", "ti"),
    ("caress", "caress"), ("cats", "cat"), ("feed", "feed"),
    ("agreed", "agre"), ("plastered", "plaster"), ("bled", "bled"),
    ("motoring", "motor"), ("sing", "sing"), ("conflated", "conflat"),
    ("troubled", "troubl"), ("sized", "size"), ("hopping", "hop"),
    ("tanned", "tan"), ("falling", "fall"), ("hissing", "hiss"),
    ("failing", "fail"), ("filing", "file"), ("happy", "happi"),
    ("sky", "sky"), ("relational", "relat"), ("conditional", "condit"),
    ("rational", "ration"), ("digitizer", "digit"),
    ("radically", "radic"), ("differently", "differ"),
    ("vietnamization", "vietnam"), ("predication", "predic"),
    ("operator", "oper"), ("feudalism", "feudal"),
    ("decisiveness", "decis"), ("hopefulness", "hope"),
    ("callousness", "callous"), ("formality", "formal"),
    ("sensitivity", "sensit"), ("sensibility", "sensibl"),
    ("triplicate", "triplic"), ("formative", "form"), ("formalize", "formal"),
    ("electricity", "electr"), ("electrical", "electr"),
    ("hopeful", "hope"), ("goodness", "good"), ("revival", "reviv"),
    ("allowance", "allow"), ("inference", "infer"), ("airliner", "airlin"),
    ("adjustable", "adjust"), ("defensible", "defens"),
    ("irritant", "irrit"), ("replacement", "replac"),
    ("adjustment", "adjust"), ("dependent", "depend"),
    ("adoption", "adopt"), ("communism", "commun"), ("activate", "activ"),
    ("effective", "effect"), ("probate", "probat"), ("rate", "rate"),
    ("cease", "ceas"), ("controlling", "control"), ("rolling", "roll"),
]


@pytest.mark.parametrize("word,expected", STEM_VECTORS)
def test_stemmer_vectors(word, expected):
    assert stem(word) == expected


def test_short_words_pass_through():
    for word in ("a", "is", "be", "on", "by", ""):
        assert stem(word) == word


def test_stemming_never_lengthens():
    for word, _ in STEM_VECTORS:
        assert len(stem(word)) <= len(word)
