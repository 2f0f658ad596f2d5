import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from distfeat.corpus import TokenizerConfig, load_corpus, load_stopwords, read_document  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def golden_dir():
    return GOLDEN


@pytest.fixture(scope="session")
def gates_path():
    return FIXTURES / "corpus" / "finance" / "gates_article.txt"


@pytest.fixture(scope="session")
def gates_doc(gates_path):
    return read_document(gates_path, doc_id="gates")


@pytest.fixture(scope="session")
def stopwords():
    return load_stopwords(FIXTURES / "stopwords.txt")


@pytest.fixture(scope="session")
def fixture_corpus():
    return load_corpus(FIXTURES / "corpus")


@pytest.fixture(scope="session")
def synthetic_corpus():
    return load_corpus(FIXTURES / "synthetic")


@pytest.fixture
def make_tree(tmp_path):
    """Writes ``{relpath: text}`` under a temp root and returns the root."""
    def _make(files):
        for rel, text in files.items():
            p = tmp_path / rel
            p.parent.mkdir(parents=True, exist_ok=True)
            p.write_text(text, encoding="utf-8")
        return tmp_path
    return _make


@pytest.fixture(scope="session")
def default_tokenizer():
    return TokenizerConfig()


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[i])
