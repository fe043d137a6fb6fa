"""Find the expressions in a set of XML files that contain a given sub-form.

    python3 scripts/search_by_form.py "//m:apply[m:sin]" tests/fixtures/forms/*.xml
"""

import argparse
import xml.etree.ElementTree as ET

from execdoc.selector import compile_selector, select


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("query")
    ap.add_argument("files", nargs="+")
    args = ap.parse_args()
    sel = compile_selector(args.query)
    total = 0
    for path in args.files:
        root = ET.parse(path).getroot()
        hits = select(sel, root)
        total += len(hits)
        for hit in hits:
            text = ET.tostring(hit, encoding="unicode").strip()
            print(f"{path}: {text[:100]}{'...' if len(text) > 100 else ''}")
    print(f"{total} match(es) in {len(args.files)} file(s)")


if __name__ == "__main__":
    main()
