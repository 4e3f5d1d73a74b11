from .profiles import list_profiles, load_profile, parse_profile, profile_rows, save_profile
from .rst_export import RstExport, load_rst, save_rst
from .traces import Table, read_table, read_trace, write_table, write_trace


__all__ = [
    "RstExport",
    "Table",
    "list_profiles",
    "load_profile",
    "load_rst",
    "parse_profile",
    "profile_rows",
    "read_table",
    "read_trace",
    "save_profile",
    "save_rst",
    "write_table",
    "write_trace",
]
