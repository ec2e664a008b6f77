import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ldbp.classify import (
    LABELS,
    LabeledSample,
    chi_square,
    chi_square_matrix,
    knn_predict,
    rank_neighbors,
    vote,
)
from ldbp.features import FeatureMeta, FeatureVector

import oracles

META2 = FeatureMeta("lbp", (1, 0, 0), (1.0, 0.0, 0.0), (1, 1), (1, 1))


def fv(*values, meta=META2):
    return FeatureVector(np.array(values, dtype=np.float64), meta)


def sample(values, label="Anger", subject="s"):
    return LabeledSample(fv(*values), label, subject)


# bins are 0 or at least 1/count; tinier values underflow when squared
bin_value = st.one_of(st.just(0.0), st.floats(1e-6, 1))
hist_pairs = st.integers(1, 64).flatmap(
    lambda n: st.tuples(
        st.lists(bin_value, min_size=n, max_size=n),
        st.lists(bin_value, min_size=n, max_size=n),
    )
)


class TestChiSquare:
    def test_identity(self):
        assert chi_square(fv(0.3, 0.7), fv(0.3, 0.7)) == 0.0

    def test_disjoint(self):
        assert chi_square([1, 0], [0, 1]) == 2.0

    def test_hand_example(self):
        assert abs(chi_square([0.2, 0.8], [0.4, 0.6]) - 0.0952380952) < 1e-9

    def test_empty_bins_contribute_nothing(self):
        assert chi_square([0, 0, 1], [0, 0, 1]) == 0.0

    def test_metadata_mismatch(self):
        other = FeatureMeta("ldbp", (1, 0, 0), (1.0, 0.0, 0.0), (1, 1), (1, 1))
        with pytest.raises(ValueError, match="not comparable"):
            chi_square(fv(0.5, 0.5), fv(0.5, 0.5, meta=other))

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length"):
            chi_square([1, 0], [1, 0, 0])

    @given(hist_pairs)
    def test_properties(self, pair):
        s, m = (np.array(v) for v in pair)
        d = chi_square(s, m)
        assert d == chi_square(m, s)
        assert d >= 0
        assert (d == 0) == bool(np.array_equal(s, m))
        assert d == pytest.approx(oracles.chi2(pair[0], pair[1]), rel=1e-9, abs=1e-12)
        assert chi_square(3.5 * s, 3.5 * m) == pytest.approx(3.5 * d, rel=1e-9, abs=1e-12)

    def test_matrix_matches_pairwise(self, rng):
        q = rng.random((3, 50))
        t = rng.random((7, 50))
        t[2, :10] = 0
        q[0, :10] = 0
        got = chi_square_matrix(q, t, chunk_bytes=8 * 50 * 2)
        for i in range(3):
            for j in range(7):
                assert got[i, j] == pytest.approx(chi_square(q[i], t[j]), rel=1e-12)


class TestNeighbours:
    def setup_method(self):
        # distances to query [0.2, 0.8]: 2-ish, 0.0952..., 0.5-ish
        self.train = [
            sample([1.0, 0.0], "Anger", "a"),
            sample([0.4, 0.6], "Fear", "b"),
            sample([0.0, 1.0], "Sadness", "c"),
        ]
        self.query = fv(0.2, 0.8)

    def test_rank_k2(self):
        ranked = rank_neighbors(self.train, self.query, 2)
        assert [s.subject for s, _ in ranked] == ["b", "c"]
        assert ranked[0][1] == pytest.approx(0.0952381, abs=1e-7)

    def test_rank_all_sorted(self):
        ranked = rank_neighbors(self.train, self.query, 3)
        d = [x for _, x in ranked]
        assert d == sorted(d)

    def test_self_match(self):
        ranked = rank_neighbors(self.train, self.train[2].features, 1)
        assert ranked == [(self.train[2], 0.0)]
        assert knn_predict(self.train, self.train[2].features, 1) == "Sadness"

    def test_ties_keep_training_order(self):
        train = [sample([0.5, 0.5], "Fear", str(i)) for i in range(5)]
        assert [s.subject for s, _ in rank_neighbors(train, fv(0.1, 0.9), 3)] == ["0", "1", "2"]

    @pytest.mark.parametrize("K", [0, 4])
    def test_k_out_of_range(self, K):
        with pytest.raises(ValueError, match="K must"):
            rank_neighbors(self.train, self.query, K)

    def test_empty_training_set(self):
        with pytest.raises(ValueError):
            knn_predict([], self.query, 1)

    def test_permutation_invariance(self, rng):
        train = [sample(rng.dirichlet(np.ones(2)), LABELS[i % 7], str(i)) for i in range(30)]
        query = fv(*rng.dirichlet(np.ones(2)))
        want = knn_predict(train, query, 5)
        for _ in range(5):
            perm = [train[i] for i in rng.permutation(30)]
            assert knn_predict(perm, query, 5) == want


class TestVote:
    def test_majority(self):
        assert vote(["Anger", "Anger", "Fear"], [0.5, 0.6, 0.1]) == "Anger"

    def test_tie_by_distance(self):
        assert vote(["Fear", "Anger"], [0.1, 0.3]) == "Fear"

    def test_tie_by_label(self):
        assert vote(["Surprise", "Anger"], [0.2, 0.2]) == "Anger"

    def test_empty(self):
        with pytest.raises(ValueError):
            vote([], [])


def test_labels_alphabetical():
    assert list(LABELS) == sorted(LABELS) and len(LABELS) == 7


def test_unknown_label():
    with pytest.raises(ValueError, match="Joy"):
        sample([0.5, 0.5], "Joy")
