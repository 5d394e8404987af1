"""Run an existing masked-language-model checkpoint over tokenized period
slices and emit contextual sentence records (last K hidden layers plus
word-to-piece spans) in the interchange format the analysis toolkit reads."""

from .export import ExportConfig, ExportSummary, export
from .records import validate_record_file, write_record

__version__ = "0.1.0"

__all__ = ["ExportConfig", "ExportSummary", "export", "validate_record_file", "write_record"]
