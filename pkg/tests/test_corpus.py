import json
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causaforge.corpus import (
    DocumentRecord,
    FilterCriteria,
    chunk_text,
    filter_documents,
    load_corpus,
    strip_references,
    token_estimate,
)
from causaforge.errors import CorruptRecord


def doc(**overrides) -> DocumentRecord:
    base = dict(
        doc_id="PMC1",
        title="A study",
        abstract="Observations about mood.",
        journal="Frontiers in Psychology",
        year=2021,
        body_text="",
    )
    base.update(overrides)
    return DocumentRecord(**base)


class TestFilterDocuments:
    def test_journal_term_match_kept(self):
        criteria = FilterCriteria(keywords=("psychol",), journal_required_term="psychol")
        kept = filter_documents([doc(journal="Frontiers in Psychology")], criteria)
        assert len(kept) == 1

    def test_no_match_anywhere_excluded(self):
        criteria = FilterCriteria(keywords=("psychol",))
        kept = filter_documents(
            [doc(title="Alkene oxidation", abstract="Catalysis.", journal="Journal of Chemistry")],
            criteria,
        )
        assert kept == []

    def test_title_keyword_case_insensitive(self):
        criteria = FilterCriteria(keywords=("clin psychol",))
        kept = filter_documents(
            [doc(title="Advances in Clin Psychol practice", journal="Some Journal")], criteria
        )
        assert len(kept) == 1

    def test_journal_term_alone_restricts(self):
        criteria = FilterCriteria(
            keywords=("mood",), journal_required_term="psychol"
        )
        docs = [
            doc(doc_id="PMC1", abstract="mood and sleep", journal="Frontiers in Psychology"),
            doc(doc_id="PMC2", abstract="mood and sleep", journal="Sleep Research"),
        ]
        assert [d.doc_id for d in filter_documents(docs, criteria)] == ["PMC1"]

    def test_order_preserved_and_idempotent(self):
        criteria = FilterCriteria(keywords=("psychol",))
        docs = [doc(doc_id=f"PMC{i}") for i in range(5)]
        once = filter_documents(docs, criteria)
        assert [d.doc_id for d in once] == [f"PMC{i}" for i in range(5)]
        assert filter_documents(once, criteria) == once

    def test_empty_criteria_rejected(self):
        with pytest.raises(ValueError):
            FilterCriteria(keywords=())


# Independent classifier for standalone reference-heading lines.
def _heading_oracle(line: str) -> bool:
    body = line.strip().lower()
    body = re.sub(r"^(\d{1,3}|[ivxlc]{1,7})([.):\-]\s*|\s+)", "", body)
    body = body.rstrip(" .:-")
    return body in ("references", "reference", "bibliography")


class TestStripReferences:
    def test_standalone_heading_cut(self):
        text = "Intro...\n\nReferences\n1. Smith 2001"
        assert strip_references(text) == "Intro...\n\n"

    def test_mid_sentence_mention_unchanged(self):
        text = "The result holds; see references therein for detail, and more prose."
        assert strip_references(text) == text
        assert not any(_heading_oracle(l) for l in text.splitlines())

    def test_no_heading_identity(self):
        text = "Only body text.\nAcross two lines."
        assert strip_references(text) == text

    def test_cut_at_last_heading(self):
        text = "a\nReferences\nb\nREFERENCES:\ntail"
        assert strip_references(text) == "a\nReferences\nb\n"

    @pytest.mark.parametrize(
        "heading",
        ["References", "REFERENCES", "Reference", "Bibliography", "references.",
         "6. References", "IV) References", "References:"],
    )
    def test_heading_variants(self, heading):
        assert _heading_oracle(heading)
        text = f"body text\n{heading}\nSmith, J. (2001)."
        assert strip_references(text) == "body text\n"

    @pytest.mark.parametrize(
        "line", ["see references", "references were managed in Zotero", "the bibliography says"]
    )
    def test_non_standalone_lines_survive(self, line):
        assert not _heading_oracle(line)
        text = f"intro\n{line}\nmore"
        assert strip_references(text) == text

    @given(
        body=st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=200),
        tail=st.text(max_size=100),
        heading=st.sampled_from(["References", "reference", "BIBLIOGRAPHY", "2. References."]),
        insert=st.booleans(),
    )
    @settings(max_examples=150)
    def test_heading_removal_property(self, body, tail, heading, insert):
        # Keep the generated body free of accidental headings so the single
        # inserted one is the last; the cut-at-last rule then removes it.
        lines = [l for l in body.splitlines() if not _heading_oracle(l)]
        clean = "\n".join(lines)
        if insert:
            text = clean + "\n" + heading + "\n" + tail.replace("\n", " ")
        else:
            text = clean
        result = strip_references(text)
        assert len(result) <= len(text)
        if insert:
            assert result == clean + "\n"
        assert not any(_heading_oracle(l) for l in result.splitlines())


class TestChunkText:
    def test_small_paragraph_single_chunk(self):
        text = "x" * 100
        chunks = chunk_text(text, "PMC1")
        assert len(chunks) == 1
        assert chunks[0].token_estimate == 25

    def test_uniform_text_ceiling(self):
        text = "a" * 40_000
        chunks = chunk_text(text, "PMC1", max_tokens=4000)
        assert len(chunks) == 3
        assert sum(c.token_estimate for c in chunks) == 10_000

    def test_empty_text(self):
        assert chunk_text("", "PMC1") == []

    def test_paragraphs_preferred_over_sentences(self):
        text = ("alpha. " * 30 + "\n\n") * 4
        chunks = chunk_text(text, "PMC1", max_tokens=60)
        # 210 bytes per paragraph, 240-byte budget: one paragraph per chunk.
        assert len(chunks) == 4
        assert all(c.text.startswith("alpha") for c in chunks)

    def test_indices_sequential(self):
        chunks = chunk_text("word. " * 500, "PMC1", max_tokens=50)
        assert [c.index for c in chunks] == list(range(len(chunks)))
        assert all(c.doc_id == "PMC1" for c in chunks)

    def test_bad_max_tokens(self):
        with pytest.raises(ValueError):
            chunk_text("abc", "PMC1", max_tokens=0)

    @given(
        text=st.text(max_size=3000),
        max_tokens=st.integers(min_value=1, max_value=200),
    )
    @settings(max_examples=200)
    def test_concatenation_and_budget_properties(self, text, max_tokens):
        chunks = chunk_text(text, "PMC1", max_tokens=max_tokens)
        assert "".join(c.text for c in chunks).encode() == text.encode()
        for chunk in chunks:
            assert chunk.token_estimate <= max_tokens
            assert chunk.token_estimate == token_estimate(chunk.text)


class TestLoadCorpus:
    def test_round_trip_with_unknown_keys(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        rows = [
            {"doc_id": "PMC1", "title": "t", "abstract": "a", "journal": "J Psychol",
             "year": 2020, "body_text": "body", "extra_key": 1},
            {"doc_id": "PMC2", "title": "t2", "abstract": "a2", "journal": "J", "year": 1999},
        ]
        path.write_text("\n".join(json.dumps(r) for r in rows), encoding="utf-8")
        docs = load_corpus(str(path))
        assert [d.doc_id for d in docs] == ["PMC1", "PMC2"]
        assert docs[1].body_text == ""

    def test_corrupt_line_reports_number(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text('{"doc_id": "PMC1", "year": 2020}\n{broken\n', encoding="utf-8")
        with pytest.raises(CorruptRecord) as err:
            load_corpus(str(path))
        assert err.value.line_number == 2

    def test_year_out_of_range(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text('{"doc_id": "PMC1", "year": 1640}\n', encoding="utf-8")
        with pytest.raises(CorruptRecord):
            load_corpus(str(path))

    def test_duplicate_doc_id(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text(
            '{"doc_id": "PMC1", "year": 2020}\n{"doc_id": "PMC1", "year": 2021}\n',
            encoding="utf-8",
        )
        with pytest.raises(CorruptRecord):
            load_corpus(str(path))
