"""Building blocks and the hand-built configuration library.

The four building blocks are encoded by their curves (as cyclic vertex
sequences) and crossing signs.  Hand cases live as JSON files in the
asset directory, which ``STRATA_ASSET_DIR`` can override; every asset is
certified by :func:`strata.config.verify` when loaded.
"""

import json
import os
from functools import lru_cache
from pathlib import Path

from .config import from_curves, from_json, verify
from .errors import MalformedConfiguration, UnknownBlock

_BLOCKS = {
    # sphere, signature (3, 1^5): a_2 crosses b_1 twice and b_2 twice
    "B3": (
        [("a", 1, ["O", "Inf"]), ("b", 1, ["O", "v1", "v3", "Inf"]),
         ("a", 2, ["v1", "P2", "P1", "v3"]), ("b", 2, ["P1", "P2"])],
        dict(O="+", Inf="-", v1="+", v3="-", P2="-", P1="+"),
    ),
    # sphere, signature (4, 1^6): as B3 but b_2 crosses a_2 four times
    "B4": (
        [("a", 1, ["O", "Inf"]), ("b", 1, ["O", "v1", "v3", "Inf"]),
         ("a", 2, ["v1", "q1", "q2", "q3", "q4", "v3"]), ("b", 2, ["q1", "q4", "q3", "q2"])],
        dict(O="+", Inf="-", v1="+", v3="-", q1="+", q4="-", q3="+", q2="-"),
    ),
    # sphere, signature (1^4): two great circles meeting twice
    "GreatCircles": (
        [("a", 1, ["x", "y"]), ("b", 1, ["x", "y"])],
        dict(x="+", y="-"),
    ),
    # torus, empty signature, orientable
    "TorusMerLong": (
        [("a", 1, ["v"]), ("b", 1, ["v"])],
        dict(v="+"),
    ),
}

BLOCK_NAMES = tuple(_BLOCKS)


@lru_cache(maxsize=None)
def _block(name):
    curves, signs = _BLOCKS[name]
    cfg = from_curves(curves, signs, name=name)
    verify(cfg)
    return cfg


def building_block(name):
    """Return a fresh copy of a stored building block."""
    if name not in _BLOCKS:
        raise UnknownBlock(f"unknown building block {name!r}; choose from {', '.join(BLOCK_NAMES)}")
    return _block(name).copy()


def asset_dir():
    env = os.environ.get("STRATA_ASSET_DIR")
    if env:
        return Path(env)
    return Path(__file__).with_name("assets")


def load_asset(name, directory=None):
    """Load and certify the hand-built configuration ``name`` (file ``name.json``)."""
    path = Path(directory or asset_dir()) / f"{name}.json"
    if not path.exists():
        raise UnknownBlock(f"no asset {name!r} in {path.parent}")
    with open(path) as fh:
        data = json.load(fh)
    cfg = from_json(data)
    report = verify(cfg)
    want = data.get("expect")
    if want:
        got = {"genus": report["genus"], "prongs": report["prongs"], "sign": report["sign"],
               "k": report["k"]}
        for key, val in want.items():
            if got.get(key) != val:
                raise MalformedConfiguration(
                    f"asset {name}: expected {key}={val}, verifier found {got.get(key)}")
        if not report["optimal"]:
            raise MalformedConfiguration(f"asset {name} is not optimal")
    return cfg


def list_assets(directory=None):
    d = Path(directory or asset_dir())
    if not d.is_dir():
        return []
    return sorted(p.stem for p in d.glob("*.json"))
