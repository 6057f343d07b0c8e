import logging

import numpy as np
import pytest
from hypothesis import given, strategies as st

from grarules.core import Kind
from grarules.ingest import (
    DEFAULT_AGE_BINS,
    GENRES,
    UNKNOWN_DECADE,
    CorpusError,
    DiscretizationSpec,
    DuplicateKeyError,
    ParseError,
    PrioritySpec,
    decade,
    dump_generic,
    genre_sets,
    load_generic,
    load_ml100k,
    load_movies,
    load_ratings,
    load_users,
)

from conftest import TOY, requires_corpus
from oracles import random_mmer, rng_for


def write(tmp_path, name, text, encoding="latin-1"):
    p = tmp_path / name
    p.write_text(text, encoding=encoding)
    return p


def item_line(mid, date, flags, title="Some Film (1995)"):
    return f"{mid}|{title}|{date}||http://x|" + "|".join(map(str, flags)) + "\n"


def flags(*genres, unknown=0):
    return [unknown] + [int(g in genres) for g in GENRES]


class TestAgeBins:
    def test_default_labels(self):
        assert DEFAULT_AGE_BINS.labels == (
            "[0,17]", "[18,24]", "[25,34]", "[35,44]", "[45,49]", "[50,55]", "[56,inf)"
        )

    @pytest.mark.parametrize("age,label", [(0, "[0,17]"), (17, "[0,17]"), (18, "[18,24]"),
                                           (24, "[18,24]"), (55, "[50,55]"), (56, "[56,inf)"), (99, "[56,inf)")])
    def test_edges(self, age, label):
        assert DEFAULT_AGE_BINS.label(age) == label

    def test_bounds_must_increase(self):
        with pytest.raises(ValueError):
            DiscretizationSpec("Age-bin", (17, 17, 30))

    @given(st.lists(st.integers(0, 120), min_size=1, max_size=8, unique=True), st.integers(0, 200))
    def test_totality(self, bounds, age):
        spec = DiscretizationSpec("a", tuple(sorted(bounds)))
        label = spec.label(age)
        assert spec.labels.count(label) == 1
        lo, hi = label[1:-1].split(",")
        assert int(lo) <= age and (hi == "inf" or age <= int(hi))


class TestUsers:
    def test_first_row(self, tmp_path):
        p = write(tmp_path, "u.user", "1|24|M|technician|85711\n2|53|F|other|94043\n")
        users = load_users(p)
        assert users.objects == (1, 2)
        assert [users.value(0, j) for j in range(3)] == ["[18,24]", "M", "technician"]
        assert [a.name for a in users.schema] == ["Age-bin", "Gender", "Occupation"]

    def test_bad_field_count(self, tmp_path):
        p = write(tmp_path, "u.user", "1|24|M|technician|85711\n2|53|F|other\n")
        with pytest.raises(ParseError, match=":2:"):
            load_users(p)

    def test_bad_age(self, tmp_path):
        p = write(tmp_path, "u.user", "1|old|M|technician|85711\n")
        with pytest.raises(ParseError, match=":1:.*age"):
            load_users(p)

    def test_duplicate_id(self, tmp_path):
        p = write(tmp_path, "u.user", "1|24|M|technician|85711\n1|25|M|writer|85711\n")
        with pytest.raises(DuplicateKeyError):
            load_users(p)

    def test_empty_file(self, tmp_path):
        assert load_users(write(tmp_path, "u.user", "")).size == 0


class TestMovies:
    def test_decades(self):
        assert decade("01-Jan-1995") == "1990s"
        assert decade("15-Mar-1990") == "1990s"
        assert decade("31-Dec-1989") == "1980s"
        assert decade("") == UNKNOWN_DECADE

    def test_scaling(self, tmp_path):
        p = write(tmp_path, "u.item", item_line(1, "01-Jan-1995", flags("Adventure", "Animation"))
                  + item_line(2, "", flags(unknown=1)))
        movies = load_movies(p)
        assert len(movies.schema) == 19
        assert movies.schema[0].name == "Release-decade"
        assert all(a.kind is Kind.SCALED for a in movies.schema[1:])
        row = {a.name: movies.value(0, j) for j, a in enumerate(movies.schema)}
        assert row["Release-decade"] == "1990s"
        assert (row["Action"], row["Adventure"], row["Animation"]) == (0, 1, 1)
        assert movies.value(1, 0) == UNKNOWN_DECADE

    def test_keep_unknown(self, tmp_path):
        p = write(tmp_path, "u.item", item_line(1, "01-Jan-1995", flags(unknown=1)))
        movies = load_movies(p, keep_unknown=True)
        assert movies.schema[1].name == "unknown" and movies.value(0, 1) == 1

    def test_priority(self, tmp_path, caplog):
        p = write(tmp_path, "u.item", item_line(1, "01-Jan-1995", flags("Comedy", "Action"))
                  + item_line(2, "01-Jan-1995", flags(unknown=1))
                  + item_line(3, "01-Jan-1995", flags()))
        with caplog.at_level(logging.INFO, logger="grarules.ingest"):
            movies = load_movies(p, "priority")
        assert [a.name for a in movies.schema] == ["Release-decade", "Genre"]
        assert [movies.value(i, 1) for i in range(3)] == ["Action", "unknown", "unknown"]
        assert "no genre flag" in caplog.text
        custom = load_movies(p, "priority", PrioritySpec(("Comedy", "Action")))
        assert custom.value(0, 1) == "Comedy"

    def test_priority_spec_validation(self):
        with pytest.raises(ValueError):
            PrioritySpec(("Action", "Action"))
        with pytest.raises(ValueError):
            PrioritySpec(("Noir",))

    @pytest.mark.parametrize("line", [
        item_line(1, "1995-01-01", flags()),
        item_line(1, "01-Jan-1995", flags())[:-3] + "\n",
        item_line(1, "01-Jan-1995", [2] + flags()[1:]),
        "x" + item_line(1, "01-Jan-1995", flags()),
    ])
    def test_parse_errors(self, tmp_path, line):
        with pytest.raises(ParseError):
            load_movies(write(tmp_path, "u.item", line))


class TestRatings:
    def test_threshold_and_merge(self, tmp_path, caplog):
        p = write(tmp_path, "u.data", "1\t1\t2\t0\n1\t2\t5\t0\n2\t1\t4\t0\n1\t1\t4\t9\n", "ascii")
        with caplog.at_level(logging.INFO, logger="grarules.ingest"):
            rel = load_ratings(p, 2, 2, min_rating=4)
        assert sorted(rel.pairs()) == [(0, 0), (0, 1), (1, 0)]
        assert "duplicate" in caplog.text
        assert len(load_ratings(p, 2, 2)) == 3

    @pytest.mark.parametrize("text", ["3\t1\t2\t0\n", "1\t1\t6\t0\n", "1\t1\t2\n", "1\tx\t2\t0\n"])
    def test_errors(self, tmp_path, text):
        with pytest.raises(ParseError):
            load_ratings(write(tmp_path, "u.data", text, "ascii"), 2, 2)

    def test_min_rating_range(self, tmp_path):
        with pytest.raises(ValueError):
            load_ratings(write(tmp_path, "u.data", "", "ascii"), 2, 2, min_rating=6)

    def test_empty(self, tmp_path):
        rel = load_ratings(write(tmp_path, "u.data", "", "ascii"), 2, 3)
        assert rel.forward.shape == (2, 3) and len(rel) == 0


class TestGeneric:
    def test_toy(self, toy):
        assert toy.source.objects == ("u1", "u2", "u3")
        assert [a.name for a in toy.source.schema] == ["Gender", "Student"]
        assert toy.source.schema[1].is_scaled and not toy.source.schema[0].is_scaled
        assert toy.target.value(2, 0) == "1980s"
        assert sorted(toy.relation.pairs()) == [(0, 0), (0, 2), (1, 1), (2, 0), (2, 1), (2, 2)]

    def test_scaled_column_with_two(self, tmp_path):
        for name in ("source.csv", "target.csv", "relation.csv"):
            (tmp_path / name).write_text((TOY / name).read_text())
        (tmp_path / "source.csv").write_text("id,Gender:nominal,Student:scaled\nu1,M,2\n")
        with pytest.raises(ParseError, match="scaled"):
            load_generic(tmp_path)

    def test_untyped_header(self, tmp_path):
        for name in ("source.csv", "target.csv", "relation.csv"):
            (tmp_path / name).write_text((TOY / name).read_text())
        (tmp_path / "target.csv").write_text("id,Decade\nm1,1990s\n")
        with pytest.raises(ParseError):
            load_generic(tmp_path)

    def test_bad_pair(self, tmp_path):
        for name in ("source.csv", "target.csv"):
            (tmp_path / name).write_text((TOY / name).read_text())
        (tmp_path / "relation.csv").write_text("source,target\nu9,m1\n")
        with pytest.raises(CorpusError):
            load_generic(tmp_path)

    def test_round_trip(self, toy, tmp_path):
        dump_generic(toy, tmp_path)
        assert load_generic(tmp_path) == toy

    @pytest.mark.parametrize("seed", range(10))
    def test_round_trip_random(self, seed, tmp_path):
        es = random_mmer(rng_for(seed))
        dump_generic(es, tmp_path / "a")
        once = load_generic(tmp_path / "a")
        dump_generic(once, tmp_path / "b")
        assert load_generic(tmp_path / "b") == once
        assert np.array_equal(once.relation.forward, es.relation.forward)


@requires_corpus
class TestMovieLens:
    def test_sizes(self, ml):
        assert (ml.source.size, ml.target.size, len(ml.relation)) == (943, 1682, 100000)

    def test_user_one(self, ml):
        assert [ml.source.value(0, j) for j in range(3)] == ["[18,24]", "M", "technician"]

    def test_scaling_is_lossless(self, ml, ml_dir):
        raw = genre_sets(ml_dir / "u.item")
        t = ml.target
        for i, mid in enumerate(t.objects):
            loaded = {a.name for j, a in enumerate(t.schema) if a.is_scaled and t.value(i, j) == 1}
            assert loaded == raw[mid] - {"unknown"}

    def test_priority_loss(self, ml_priority, ml_dir):
        raw = genre_sets(ml_dir / "u.item")
        multi = sum(len(g) >= 2 for g in raw.values())
        g = ml_priority.target.attribute_index("Genre")
        dropped = sum(len(raw[mid] - {ml_priority.target.value(i, g)}) >= 1
                      for i, mid in enumerate(ml_priority.target.objects) if raw[mid] != {"unknown"})
        assert multi == dropped > 0

    def test_five_star_count(self, ml_dir):
        with open(ml_dir / "u.data") as fh:
            expect = sum(line.split("\t")[2] == "5" for line in fh)
        es = load_ml100k(ml_dir, min_rating=5)
        assert len(es.relation) == expect

    def test_deterministic(self, ml, ml_dir):
        assert load_ml100k(ml_dir) == ml
