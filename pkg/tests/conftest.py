"""Shared test scaffolding.

Every test runs with sockets disabled: the engine's offline guarantees are
enforced structurally, not by trust. Anything that genuinely needs a socket
would fail loudly here.
"""

from __future__ import annotations

import socket

import pytest

from citeaudit import corpus
from citeaudit.config import RunConfig
from citeaudit.pipeline import Engine
from citeaudit.store import Store


class _SocketBlocked(RuntimeError):
    pass


@pytest.fixture(autouse=True)
def no_network(monkeypatch):
    """Refuse network socket construction for the duration of every test.

    AF_UNIX pairs stay allowed: the in-process ASGI test client runs an event
    loop whose self-pipe is a local socketpair, which never leaves the host.
    """

    class GuardedSocket(socket.socket):
        def __init__(self, family=-1, type=-1, proto=-1, fileno=None):
            if fileno is None and family in (socket.AF_INET, socket.AF_INET6):
                raise _SocketBlocked("test attempted to open a network socket")
            super().__init__(family, type, proto, fileno)

    def guard(*args, **kwargs):
        raise _SocketBlocked("test attempted to open a network connection")

    monkeypatch.setattr(socket, "socket", GuardedSocket)
    monkeypatch.setattr(socket, "create_connection", guard)


@pytest.fixture()
def small_payload() -> dict:
    return corpus.manuscript_small()


@pytest.fixture()
def screening_payload() -> dict:
    return corpus.manuscript_screening()


@pytest.fixture()
def gold_csv() -> str:
    return corpus.gold_screening_csv()


def make_engine(**config_overrides) -> Engine:
    config = RunConfig(db_path=":memory:", **config_overrides)
    return Engine(config, store=Store(":memory:"))


@pytest.fixture()
def engine() -> Engine:
    e = make_engine()
    yield e
    e.close()
