from .dot import to_dot
from .dsl import FormatError, ParseError, SourceSpan, parse, to_text, tokenize
from .jsonio import SchemaError, from_json, graph_from_dict, graph_to_dict, rat_from_json, rat_to_json, to_json

__all__ = [
    "FormatError",
    "ParseError",
    "SchemaError",
    "SourceSpan",
    "from_json",
    "graph_from_dict",
    "graph_to_dict",
    "parse",
    "rat_from_json",
    "rat_to_json",
    "to_dot",
    "to_json",
    "to_text",
    "tokenize",
]
