"""Small shared helpers: parallel mapping and atomic file writes."""

import gzip
import json
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor


def parallel_map(fn, items, workers=1):
    """Map fn over items, preserving input order.

    With workers > 1 the calls run on a thread pool; results are returned
    in input order, so output is identical for any worker count as long
    as fn is pure.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def open_maybe_gzip(path, mode="rt"):
    """Open a file, transparently decompressing by .gz extension."""
    if str(path).endswith(".gz"):
        return gzip.open(path, mode, encoding="utf-8" if "t" in mode else None)
    if "t" in mode:
        return open(path, mode, encoding="utf-8")
    return open(path, mode)


def atomic_write_text(path, text):
    """Write text to path via a temp file + rename in the same directory."""
    path = str(path)
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_json(path, obj):
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")
