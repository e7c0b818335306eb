from .export import SUPPORTED_ARCHITECTURES, TARGETS, ExportError, ExportSpec, export
from .tslxfmt import read_header, write_tslx_f32, write_vocab

__version__ = "0.1.0"

__all__ = [
    "SUPPORTED_ARCHITECTURES",
    "TARGETS",
    "ExportError",
    "ExportSpec",
    "export",
    "read_header",
    "write_tslx_f32",
    "write_vocab",
    "__version__",
]
