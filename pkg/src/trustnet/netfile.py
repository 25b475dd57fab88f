"""Line-oriented text format for trust networks.

::

    # comment
    REC <recommender> <object> <rating>
    END <recommender> <recommender> <rating>

Ids are whitespace-free tokens and ratings are decimal literals.  The
literal text of each rating is kept so that parsing and re-emitting a file
reproduces its data lines exactly.
"""
from __future__ import annotations

import math

from .errors import ParseError
from .graph import (Certificate, Endorsement, EndorsementNetwork, RecommendationNetwork,
                    TrustNetwork)

__all__ = ["parse_network", "read_network", "format_network", "write_network"]


def _rating(token, lineno):
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"rating {token!r} is not a decimal literal", lineno) from None
    if not math.isfinite(value) or value < 0:
        raise ParseError(f"rating {token!r} must be finite and nonnegative", lineno)
    return value


def parse_network(text: str) -> TrustNetwork:
    certs, ends = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 4 or parts[0] not in ("REC", "END"):
            raise ParseError(f"expected 'REC|END <src> <dst> <rating>', got {stripped!r}", lineno)
        tag, src, dst, tok = parts
        value = _rating(tok, lineno)
        if tag == "REC":
            certs.append(Certificate(f"c{lineno}", src, dst, value, literal=tok))
        else:
            ends.append(Endorsement(f"e{lineno}", src, dst, value, literal=tok))

    recommenders = list(dict.fromkeys(
        [c.source for c in certs] + [x for e in ends for x in (e.source, e.target)]))
    rec = RecommendationNetwork.from_certificates(certs, recommenders=recommenders)
    end = EndorsementNetwork.from_edges(ends, recommenders=recommenders)
    return TrustNetwork(rec, end)


def read_network(path) -> TrustNetwork:
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())


def _fmt(edge):
    return edge.literal if edge.literal is not None else repr(float(edge.rating))


def format_network(net, header: str | None = None) -> str:
    """Render a :class:`TrustNetwork`, or a bare recommendation/endorsement network."""
    if isinstance(net, TrustNetwork):
        certs, ends = net.recommendations.live(), net.endorsements.live()
    elif isinstance(net, RecommendationNetwork):
        certs, ends = net.live(), []
    else:
        certs, ends = [], net.live()
    lines = []
    if header:
        lines.extend("# " + h for h in header.splitlines())
    lines += [f"REC {c.source} {c.target} {_fmt(c)}" for c in certs]
    lines += [f"END {e.source} {e.target} {_fmt(e)}" for e in ends]
    return "\n".join(lines) + "\n"


def write_network(path, net, header=None):
    from ._io import atomic_write_text

    atomic_write_text(path, format_network(net, header))
