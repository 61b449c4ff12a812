from __future__ import annotations

import pathlib

import pytest

from bigtg import encode, extend_for_signature, fileio

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> pathlib.Path:
    return FIXTURES


@pytest.fixture(scope="session")
def sig1():
    return fileio.load_signature(str(FIXTURES / "printer.sig.json"))


@pytest.fixture(scope="session")
def b1():
    return fileio.load_bigraph(str(FIXTURES / "printer.bg.json"))


@pytest.fixture(scope="session")
def tg_sigma1(sig1):
    return extend_for_signature(sig1)


@pytest.fixture(scope="session")
def encoded1(b1):
    return encode(b1)


@pytest.fixture(scope="session")
def g1(encoded1):
    return encoded1[0]


@pytest.fixture(scope="session")
def emap1(encoded1):
    return encoded1[1]


@pytest.fixture(scope="session")
def office_bgc():
    return (FIXTURES / "office.bgc").read_text(encoding="utf-8")
