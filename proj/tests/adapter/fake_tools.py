"""Stand-ins for the raster, layout and OCR tools used by layout_to_blocks.py."""

import json
import sys
from pathlib import Path

from PIL import Image


def render(argv):
    # pdftoppm-style: -r DPI -png PDF PREFIX
    prefix = Path(argv[-1])
    for n in (1, 2):
        Image.new("RGB", (600, 800), "white").save(f"{prefix}-{n}.png")


def layout(argv):
    page = Path(argv[-1]).stem
    regions = [
        {"type": "Title", "bbox": [20, 20, 580, 60]},
        {"type": "Table", "bbox": [20, 100, 580, 300]},
        {"type": "Text", "bbox": [20, 320, 580, 420]},
        {"type": "Figure", "bbox": [20, 440, 580, 700]},
        {"type": "List", "bbox": [20, 720, 650, 790]},
    ]
    if page.endswith("2"):
        regions = regions[2:]
    print(json.dumps(regions))


def ocr(argv):
    with Image.open(argv[-1]) as crop:
        w, h = crop.size
    if h == 200:
        print("Table 1: dose  response\n")
    elif h == 100:
        print("As Table 1 shows,\nthe response rises.")
    else:
        print(f"region {w}x{h}")


if __name__ == "__main__":
    {"render": render, "layout": layout, "ocr": ocr}[sys.argv[1]](sys.argv[2:])
