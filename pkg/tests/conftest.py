from pathlib import Path

import pytest

from citemetric.corpus import Corpus, DocType, Publication

DATA = Path(__file__).parent / "data"


def pub(pid, fields=("F",), year=2005, cites=None, journal="J", doc_type=DocType.ARTICLE):
    return Publication(pid, journal, tuple(fields), year, doc_type, cites or {})


def write_files(directory, publications, citations, oeuvres):
    """Write raw CSV text (header included) for the three corpus files."""
    directory = Path(directory)
    paths = []
    for name, text in (
        ("publications.csv", publications),
        ("citations.csv", citations),
        ("oeuvres.csv", oeuvres),
    ):
        (directory / name).write_text(text, encoding="utf-8")
        paths.append(directory / name)
    return paths


@pytest.fixture
def small_files(tmp_path):
    return write_files(
        tmp_path,
        "pub_id,journal_id,pub_year,doc_type,field_ids\n"
        "P1,J1,2005,article,F\n"
        "P2,J1,2005,Article,F;G\n"
        'P3,J2,2006,LETTER,"G"\n',
        "pub_id,year,count\nP1,2005,1\nP1,2006,2\nP2,2007,3\nP3,2006,0\n",
        "researcher_id,pub_id\nR1,P1\nR1,P2\nR2,P2\nR2,P3\n",
    )


@pytest.fixture
def researcher_a_dir():
    return DATA / "researcher_a"


@pytest.fixture
def tiny_corpus():
    pubs = [
        pub("a", cites={2005: 0}),
        pub("b", cites={2005: 1, 2006: 1}),
        pub("c", cites={2006: 4}),
        pub("d", fields=("F", "G"), cites={2005: 6}),
        pub("e", fields=("G",), year=2006, cites={2006: 1, 2008: 3}),
    ]
    return Corpus.from_publications(pubs, {"R": ["a", "b", "c", "d", "e"]})


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when not in ("setup", "call"):
        return
    if report.when == "call" or report.failed:
        _CRITERIA[mark.args[0]] = (mark.args[1], "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status = _CRITERIA[number]
        terminalreporter.write_line(f"{status} criterion {number}: {title}")
