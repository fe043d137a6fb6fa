MATHML = "http://www.w3.org/1998/Math/MathML"
CML = "http://www.xml-cml.org/schema"
DEXML = "urn:execdoc:dexml"

DEFAULT_PREFIXES = {"cml": CML, "m": MATHML, "sem": DEXML}


def qname(ns, local):
    return f"{{{ns}}}{local}"


def split(tag):
    """Split a Clark-notation tag into (namespace or None, local name)."""
    if tag.startswith("{"):
        ns, local = tag[1:].split("}", 1)
        return ns, local
    return None, tag


def register_prefixes():
    import xml.etree.ElementTree as ET

    for prefix, uri in DEFAULT_PREFIXES.items():
        ET.register_namespace(prefix, uri)


register_prefixes()
