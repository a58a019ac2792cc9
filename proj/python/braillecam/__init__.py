"""Braille embosser toolchain: text to Braille cells, G-code and simulation."""

from ._braillecam import (
    BrailleCamError,
    cell_to_unicode,
    decode,
    default_config,
    derive_steps_per_mm,
    encode,
    gcode,
    layout,
    line_capacity,
    mirror_cell,
    roundtrip,
    run_cli,
    send_loopback,
    simulate,
    translate,
    unicode_to_cell,
)

__all__ = [
    "BrailleCamError",
    "cell_to_unicode",
    "decode",
    "default_config",
    "derive_steps_per_mm",
    "encode",
    "gcode",
    "layout",
    "line_capacity",
    "mirror_cell",
    "roundtrip",
    "run_cli",
    "send_loopback",
    "simulate",
    "translate",
    "unicode_to_cell",
]
