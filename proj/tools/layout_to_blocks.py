#!/usr/bin/env python3
"""Turn a PDF into block JSON by driving external tools.

Pages are rendered with a raster tool (pdftoppm by default), each page image
is passed to a layout detector command, and every non-Figure region is
cropped and sent to an OCR command. Both commands get their file argument
where "{}" appears in the command line, or appended at the end. The detector
must print a JSON array of {"type": "Text|List|Table|Title|Figure",
"bbox": [x0, y0, x1, y1]} in pixel coordinates of the page image; the OCR
command prints the recognized text.

The output is the ingestion format read by `tablescope ingest`.
"""

import argparse
import json
import shlex
import subprocess
import sys
import tempfile
from pathlib import Path

from PIL import Image

BLOCK_TYPES = {"Text", "List", "Table", "Title", "Figure"}


def run(cmd, *args):
    # "{}" in the command marks where the file argument goes; otherwise it
    # is appended.
    parts = shlex.split(cmd)
    if "{}" in parts and len(args) == 1:
        argv = [str(args[0]) if p == "{}" else p for p in parts]
    else:
        argv = parts + [str(a) for a in args]
    result = subprocess.run(argv, capture_output=True, text=True)
    if result.returncode != 0:
        sys.exit(f"{cmd}: exit {result.returncode}: {result.stderr.strip()}")
    return result.stdout


def render_pages(pdf, out_dir, render_cmd, dpi):
    run(render_cmd, "-r", dpi, "-png", pdf, Path(out_dir) / "page")
    pages = sorted(Path(out_dir).glob("page*.png"))
    if not pages:
        sys.exit(f"{render_cmd} produced no page images for {pdf}")
    return pages


def clamp_box(box, width, height):
    x0, y0, x1, y1 = (float(v) for v in box)
    x0, x1 = sorted((max(0.0, min(x0, width)), max(0.0, min(x1, width))))
    y0, y1 = sorted((max(0.0, min(y0, height)), max(0.0, min(y1, height))))
    return [x0, y0, x1, y1]


def page_blocks(page_id, image_path, layout_cmd, ocr_cmd, scratch):
    image = Image.open(image_path)
    width, height = image.size
    regions = json.loads(run(layout_cmd, image_path))
    blocks = []
    for n, region in enumerate(regions):
        kind = region["type"]
        if kind not in BLOCK_TYPES:
            sys.exit(f"page {page_id}: layout tool returned unknown type {kind!r}")
        box = clamp_box(region["bbox"], width, height)
        text = ""
        if kind != "Figure" and box[2] > box[0] and box[3] > box[1]:
            crop = Path(scratch) / f"p{page_id}_r{n}.png"
            image.crop(tuple(round(v) for v in box)).save(crop)
            text = " ".join(run(ocr_cmd, crop).split())
        blocks.append({"block_id": f"p{page_id}-b{n:03d}", "type": kind,
                       "bbox": box, "text": text})
    return {"page_id": page_id, "width_px": width, "height_px": height,
            "blocks": blocks}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("pdf", type=Path)
    ap.add_argument("--doc-id", help="defaults to the PDF file stem")
    ap.add_argument("--source", default="unknown", help="corpus name, e.g. arxiv")
    ap.add_argument("--dpi", type=int, default=144)
    ap.add_argument("--render-cmd", default="pdftoppm")
    ap.add_argument("--layout-cmd", required=True,
                    help="detector command; page image path goes at {} or is appended")
    ap.add_argument("--ocr-cmd", default="tesseract {} stdout --psm 6",
                    help="OCR command; crop image path goes at {} or is appended")
    ap.add_argument("--pages-dir", type=Path,
                    help="also keep page images here as <doc_id>/<page_id>.png")
    ap.add_argument("-o", "--out", type=Path, help="output file (default stdout)")
    args = ap.parse_args(argv)

    doc_id = args.doc_id or args.pdf.stem
    with tempfile.TemporaryDirectory() as scratch:
        images = render_pages(args.pdf, scratch, args.render_cmd, args.dpi)
        pages = [page_blocks(i, img, args.layout_cmd, args.ocr_cmd, scratch)
                 for i, img in enumerate(images)]
        if args.pages_dir:
            target = args.pages_dir / doc_id
            target.mkdir(parents=True, exist_ok=True)
            for i, img in enumerate(images):
                Image.open(img).save(target / f"{i}.png")

    doc = {"doc_id": doc_id, "source": args.source, "pages": pages}
    text = json.dumps(doc, ensure_ascii=False, indent=1) + "\n"
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
