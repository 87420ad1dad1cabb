"""Known-answer tests driven by data/nist_kat.csv (see data/make_kat.py)."""

import csv

import numpy as np
import pytest

import make_kat
import oracles
from bitsources import resolve
from conftest import DATA, seq_of
from decaylab import nist
from decaylab.nist.templates import non_overlapping_template_test


def _params(text):
    out = {}
    for part in filter(None, text.split(";")):
        k, v = part.split("=")
        out[k] = v if k == "template" else int(v)
    return out


def _load():
    with open(DATA / "nist_kat.csv", newline="") as fh:
        return list(csv.DictReader(fh))


KAT_ROWS = _load()

def _run(name, seq, p):
    if name == "frequency":
        from decaylab.selftest import monobit_test

        return monobit_test(seq)
    if name == "block_frequency":
        return nist.block_frequency_test(seq, M=p["M"])
    if name == "cumulative_sums":
        return nist.cumulative_sums_test(seq)
    if name == "runs":
        return nist.runs_test(seq)
    if name == "longest_run":
        return nist.longest_run_test(seq)
    if name == "rank":
        return nist.binary_matrix_rank_test(seq, **p)
    if name == "dft":
        return nist.dft_test(seq)
    if name == "non_overlapping_template":
        return non_overlapping_template_test(seq, templates=(p["template"],), m=len(p["template"]), N=p["N"])
    if name == "overlapping_template":
        return nist.overlapping_template_test(seq)
    if name == "universal":
        return nist.universal_test(seq, **p)
    if name == "approximate_entropy":
        return nist.approximate_entropy_test(seq, m=p["m"])
    if name == "serial":
        return nist.serial_test(seq, m=p["m"])
    if name == "linear_complexity":
        return nist.linear_complexity_test(seq, M=p["M"])
    if name == "random_excursions":
        return nist.random_excursions_test(seq)
    if name == "random_excursions_variant":
        return nist.random_excursions_variant_test(seq)
    raise KeyError(name)


@pytest.mark.parametrize(
    "row", KAT_ROWS, ids=[f"{r['test_name']}-{r['input_bits_or_file'][:16]}" for r in KAT_ROWS]
)
def test_known_answer(row):
    seq = seq_of(row["input_bits_or_file"])
    result = _run(row["test_name"], seq, _params(row["params"]))
    expected = [float(v) for v in row["expected_p_values"].split(";")]
    got = result.p_values
    if row["test_name"] == "non_overlapping_template":
        got = tuple(result.detail["per_template"].values())
    assert len(got) == len(expected)
    np.testing.assert_allclose(got, expected, rtol=0, atol=float(row["tolerance"]))


SHORT_PUBLISHED = [
    r for r in KAT_ROWS if r["source"] == "published" and not r["input_bits_or_file"].startswith("e:")
]


@pytest.mark.parametrize(
    "row", SHORT_PUBLISHED, ids=[f"{r['test_name']}-{r['input_bits_or_file'][:16]}" for r in SHORT_PUBLISHED]
)
def test_oracles_reproduce_published_values(row):
    # guards the oracles themselves against transcription errors
    bits = resolve(row["input_bits_or_file"])
    got = make_kat.ORACLE[row["test_name"]](bits, _params(row["params"]))
    expected = [float(v) for v in row["expected_p_values"].split(";")]
    np.testing.assert_allclose(got, expected, rtol=0, atol=float(row["tolerance"]))


def test_legacy_overlapping_table_reproduces_published_e_value(e_bits):
    # the published e result was produced with the older class table
    got = oracles.overlapping_template(e_bits.to_string(), pis=oracles.OVERLAPPING_PI_LEGACY)
    assert got[0] == pytest.approx(0.110434, abs=5e-6)


def test_longest_run_on_e_close_to_tabulated_result(e_bits):
    # exact class probabilities differ from the 4-digit table in the 3rd decimal
    p = nist.longest_run_test(e_bits).p_value
    assert p == pytest.approx(0.718945, abs=1e-3)
    assert oracles.longest_run(e_bits.to_string(), 10000)[0] == pytest.approx(0.718945, abs=1e-6)


def test_excursions_on_e_match_published_states(e_bits):
    re = nist.random_excursions_test(e_bits)
    rv = nist.random_excursions_variant_test(e_bits)
    assert re.p_values[4] == pytest.approx(0.786868, abs=1e-6)  # x = +1
    assert rv.p_values[8] == pytest.approx(0.826009, abs=1e-6)  # x = -1
