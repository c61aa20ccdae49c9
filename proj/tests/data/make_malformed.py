"""Regenerates the malformed/ corpus and its manifest.

Run from this directory: python3 make_malformed.py
"""

import os
import struct

TAG = struct.pack("<f", 202021.25)


def flo(w, h, n=None, tag=TAG):
    n = w * h if n is None else n
    return tag + struct.pack("<ii", w, h) + b"\0" * (8 * n)


CASES = [
    # name, bytes, expected error class
    ("empty.pgm", b"", "ParseError"),
    ("bad_magic.pgm", b"Q5\n2 2\n255\n\0\0\0\0", "ParseError"),
    ("pam_variant.pgm", b"P7\nWIDTH 2\n", "UnsupportedFormatError"),
    ("ascii_magic_only.pgm", b"P5", "ParseError"),
    ("missing_height.pgm", b"P5\n4\n", "ParseError"),
    ("negative_width.pgm", b"P5\n-4 2\n255\n" + b"\0" * 8, "ParseError"),
    ("zero_width.pgm", b"P5\n0 2\n255\n", "ParseError"),
    ("zero_maxval.pgm", b"P5\n2 2\n0\n\0\0\0\0", "ParseError"),
    ("maxval_16bit.pgm", b"P5\n2 2\n65535\n" + b"\0" * 8, "UnsupportedFormatError"),
    ("truncated_raster.pgm", b"P5\n4 4\n255\n" + b"\0" * 10, "ParseError"),
    ("no_separator.pgm", b"P5\n2 2\n255", "ParseError"),
    ("garbage_dims.pgm", b"P5\nab cd\n255\n", "ParseError"),
    ("color_ppm.pgm", b"P6\n2 2\n255\n" + b"\0" * 12, "UnsupportedFormatError"),
    ("ascii_bad_value.pgm", b"P2\n2 1\n255\n12 x\n", "ParseError"),
    ("ascii_over_maxval.pgm", b"P2\n2 1\n255\n12 300\n", "ParseError"),
    ("empty.flo", b"", "LengthError"),
    ("short_tag.flo", TAG[:3], "LengthError"),
    ("bad_tag.flo", flo(2, 2, tag=struct.pack("<f", 1.0)), "FormatError"),
    ("pieh_text.flo", b"PIEH" + b"\0" * 40, "FormatError"),
    ("header_only_tag.flo", TAG + b"\1\0", "LengthError"),
    ("zero_width.flo", flo(0, 3), "FormatError"),
    ("negative_height.flo", TAG + struct.pack("<ii", 3, -1), "FormatError"),
    ("huge_dims.flo", TAG + struct.pack("<ii", 1 << 21, 4), "FormatError"),
    ("truncated_payload.flo", flo(4, 4, n=15), "LengthError"),
    ("trailing_bytes.flo", flo(2, 2) + b"\0", "LengthError"),
]


def main():
    os.makedirs("malformed", exist_ok=True)
    with open("malformed/manifest.txt", "w") as manifest:
        manifest.write("# file expected-error\n")
        for name, data, err in CASES:
            with open(os.path.join("malformed", name), "wb") as fh:
                fh.write(data)
            manifest.write(f"{name} {err}\n")


if __name__ == "__main__":
    main()
