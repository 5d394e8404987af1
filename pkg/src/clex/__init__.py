"""clex: lexical semantic change detection for dated historical corpora.

The toolkit splits a dated corpus into period slices, trains aligned static
word embeddings from scratch, averages externally exported contextual token
embeddings into per-period word vectors, and scores semantic change against
gold binary labels.
"""

from . import analysis, contextual, corpus, report, sgns
from .errors import ParseError, ValidationError

__version__ = "0.1.0"

__all__ = [
    "analysis",
    "contextual",
    "corpus",
    "report",
    "sgns",
    "ParseError",
    "ValidationError",
    "__version__",
]
