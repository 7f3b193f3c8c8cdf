import pytest

from oerhub.errors import LoadError, ParseError, UsageError
from oerhub.wordnetdb import (
    POS,
    dump_data_line,
    hypernym_path_length,
    load_database,
    lookup_senses,
    morph_normalize,
    _parse_data_line,
)
from oracles import all_pairs_path_nodes, max_depth_oracle


def synset_key_map(db, manifest):
    """Map manifest synset keys to loaded synsets via (pos, lemmas, gloss)."""
    by_fields = {(s.id.pos.value, tuple(s.lemmas), s.gloss): s
                 for s in db.synsets.values()}
    mapping = {}
    for entry in manifest["synsets"]:
        key = (entry["pos"], tuple(entry["lemmas"]), entry["definition"])
        assert key in by_fields, f"manifest synset {entry['key']} not loaded"
        mapping[entry["key"]] = by_fields[key]
    return mapping


class TestLoad:
    def test_counts_match_manifest(self, wn, manifest):
        by_pos = {}
        for s in wn.synsets.values():
            by_pos[s.id.pos.value] = by_pos.get(s.id.pos.value, 0) + 1
        assert by_pos == manifest["counts"]

    def test_lemmas_glosses_examples_match_manifest(self, wn, manifest):
        mapping = synset_key_map(wn, manifest)
        for entry in manifest["synsets"]:
            s = mapping[entry["key"]]
            assert s.lemmas == entry["lemmas"]
            assert s.gloss == entry["definition"]
            assert s.examples == entry["examples"]

    def test_relations_match_manifest(self, wn, manifest):
        mapping = synset_key_map(wn, manifest)
        for entry in manifest["synsets"]:
            s = mapping[entry["key"]]
            expected = sorted((kind, mapping[target].id)
                              for kind, target in entry["relations"])
            assert sorted(s.relations) == expected

    def test_exceptions_match_manifest(self, wn, manifest):
        for pos_name, pairs in manifest["exceptions"].items():
            pos = POS(pos_name)
            for surface, lemmas in pairs:
                assert wn.exceptions[(surface, pos)] == lemmas

    def test_max_depth_matches_manifest_and_oracle(self, wn, manifest):
        for pos in POS:
            assert wn.max_depth[pos] == manifest["max_depth"][pos.value]
            assert wn.max_depth[pos] == max_depth_oracle(wn, pos)

    def test_empty_directory(self, tmp_path):
        with pytest.raises(LoadError, match="no index files found"):
            load_database(tmp_path)

    def test_malformed_data_line_positioned(self, miniwn_copy):
        data = miniwn_copy / "data.noun"
        lines = data.read_text().splitlines()
        lines[5] = "garbage line that is not a record"
        data.write_text("\n".join(lines) + "\n")
        with pytest.raises(ParseError) as exc:
            load_database(miniwn_copy)
        assert exc.value.filename == "data.noun"
        assert exc.value.line_no == 6

    def test_dangling_pointer_names_synset(self, miniwn_copy):
        data = miniwn_copy / "data.noun"
        text = data.read_text()
        # retarget the first hypernym pointer of the land synset to nowhere
        assert "@ 00000247 n 0000 ~" in text
        data.write_text(text.replace("@ 00000247 n 0000 ~",
                                     "@ 09999999 n 0000 ~", 1))
        with pytest.raises(LoadError, match="land"):
            load_database(miniwn_copy)

    def test_index_entry_to_missing_synset(self, miniwn_copy):
        index = miniwn_copy / "index.noun"
        lines = index.read_text().splitlines()
        lines[-1] = "zebra n 1 0 1 0 09999999"
        index.write_text("\n".join(lines) + "\n")
        with pytest.raises(LoadError, match="zebra"):
            load_database(miniwn_copy)


class TestLookup:
    def test_run_verb_order(self, wn):
        senses = lookup_senses(wn, "run", POS.VERB)
        assert [s.gloss for s in senses] == [
            "move fast by using one's legs",
            "direct or control; projects, businesses, etc.",
        ]

    def test_absent_lemma_is_empty(self, wn):
        assert lookup_senses(wn, "zzzz", POS.NOUN) == []

    def test_bank_noun_order(self, wn):
        senses = lookup_senses(wn, "bank", POS.NOUN)
        assert len(senses) == 2
        assert "financial institution" in senses[0].gloss
        assert "land alongside" in senses[1].gloss


class TestMorphNormalize:
    def test_plural_rule(self, wn):
        assert morph_normalize(wn, "dogs", POS.NOUN) == ["dog"]

    def test_exception_file(self, wn):
        assert morph_normalize(wn, "ran", POS.VERB) == ["run"]

    def test_indexed_base_form_identity(self, wn):
        assert morph_normalize(wn, "run", POS.VERB) == ["run"]

    def test_men_exception(self, wn):
        assert morph_normalize(wn, "men", POS.NOUN) == ["man"]

    def test_verb_ing(self, wn):
        assert "run" not in morph_normalize(wn, "walking", POS.VERB)
        assert morph_normalize(wn, "walking", POS.VERB) == ["walk"]

    def test_every_exception_surface_resolves(self, wn):
        for (surface, pos) in wn.exceptions:
            candidates = morph_normalize(wn, surface, pos)
            assert any(lookup_senses(wn, c, pos) for c in candidates)


class TestPathLength:
    def test_identity_is_one(self, wn):
        sid = wn.index[("entity", POS.NOUN)][0]
        assert hypernym_path_length(wn, sid, sid) == 1

    def test_chain_of_three(self, wn):
        land = wn.index[("land", POS.NOUN)][0]
        entity = wn.index[("entity", POS.NOUN)][0]
        assert hypernym_path_length(wn, land, entity) == 3

    def test_across_branches(self, wn):
        land = wn.index[("land", POS.NOUN)][0]
        abstraction = wn.index[("abstraction", POS.NOUN)][0]
        assert hypernym_path_length(wn, land, abstraction) == 4

    def test_pos_mismatch(self, wn):
        noun = wn.index[("dog", POS.NOUN)][0]
        verb = wn.index[("walk", POS.VERB)][0]
        with pytest.raises(UsageError):
            hypernym_path_length(wn, noun, verb)

    def test_non_taxonomic_pos(self, wn):
        fast = wn.index[("fast", POS.ADJECTIVE)][0]
        with pytest.raises(UsageError):
            hypernym_path_length(wn, fast, fast)

    @pytest.mark.parametrize("pos", [POS.NOUN, POS.VERB])
    def test_matches_oracle_symmetric_triangle(self, wn, pos):
        oracle = all_pairs_path_nodes(wn, pos)
        nodes = [sid for sid in wn.synsets if sid.pos is pos]
        for a in nodes:
            for b in nodes:
                assert hypernym_path_length(wn, a, b) == oracle[(a, b)]
                assert oracle[(a, b)] == oracle[(b, a)]
        # triangle inequality on edge counts (nodes - 1)
        for a in nodes:
            for b in nodes:
                for c in nodes:
                    ab, bc, ac = oracle[(a, b)], oracle[(b, c)], oracle[(a, c)]
                    if ab is not None and bc is not None and ac is not None:
                        assert ac - 1 <= (ab - 1) + (bc - 1)


class TestDumpRoundTrip:
    def test_reserialize_preserves_fields(self, wn):
        for s in wn.synsets.values():
            reparsed = _parse_data_line("<dump>", 1, dump_data_line(s))
            assert reparsed.lemmas == s.lemmas
            assert reparsed.gloss == s.gloss
            assert reparsed.examples == s.examples
            assert sorted(reparsed.relations) == sorted(s.relations)
            assert reparsed.id == s.id
