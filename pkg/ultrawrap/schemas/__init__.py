import json
import pathlib
from typing import Dict

import jsonschema

from ultrawrap.exceptions import DocumentError


SCHEMAS_DIR = pathlib.Path(__file__).parent.resolve()
DOCUMENTS = ("ultra_scalar", "cd_element", "magma_table", "finite_map", "grid_map", "transport_map")

_cache: Dict[str, dict] = {}


def load_schema(name: str) -> dict:
    if name not in DOCUMENTS:
        raise DocumentError(f"No schema named {name!r}")
    if name not in _cache:
        with open(SCHEMAS_DIR / f"{name}.json") as fid:
            _cache[name] = json.load(fid)
    return _cache[name]


def check_document(doc, name: str) -> dict:
    """
    Validate ``doc`` against the named schema and return it unchanged.

    Raises
    ------
    DocumentError
        Wrapping the first ``jsonschema.ValidationError``.
    """
    schema = load_schema(name)
    try:
        jsonschema.validate(doc, schema, cls=jsonschema.Draft202012Validator)
    except jsonschema.ValidationError as err:
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise DocumentError(f"{name} document invalid at {where}: {err.message}") from err
    if name == "transport_map":
        check_document(doc["base"], "grid_map")
        check_document(doc["group"], "magma_table")
    return doc
