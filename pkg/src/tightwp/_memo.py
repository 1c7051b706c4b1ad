"""Thread-safe compute-once memoization for the recursions."""

from __future__ import annotations

import functools
import threading

_REGISTRY = []


def memoize(func):
    """Cache by positional args.  A reentrant lock serializes computation so a
    key is computed once even when several threads ask for it; recursive calls
    from the computing thread pass straight through."""
    cache = {}
    lock = threading.RLock()

    @functools.wraps(func)
    def wrapper(*args):
        try:
            return cache[args]
        except KeyError:
            pass
        with lock:
            if args not in cache:
                cache[args] = func(*args)
            return cache[args]

    wrapper.cache = cache
    wrapper.cache_clear = cache.clear
    _REGISTRY.append(wrapper)
    return wrapper


def clear_caches():
    for w in _REGISTRY:
        w.cache_clear()
