"""Small hand-checkable instances shared by several test modules."""

import itertools

from proxyfinder import AttributeSchema, FunctionDef, ProductDistribution, ProxyInstance, TabularDistribution


def binary_table(names, rule):
    """Uniform distribution over the first attributes; the last one is ``rule(*others)``."""
    schema = AttributeSchema.from_pairs((n, ("0", "1")) for n in names)
    free = len(names) - 1
    entries = []
    for bits in itertools.product("01", repeat=free):
        entries.append((bits + (str(rule(*map(int, bits))),), 1 / 2**free))
    return schema, TabularDistribution(schema, entries)


def xor_instance(alpha=0.0, decoy=False):
    """a2 = a0 XOR a1 with a0, a1 uniform; optional third function independent of a2."""
    names = ["a0", "a1", "a2"] + (["d"] if decoy else [])
    schema = AttributeSchema.from_pairs((n, ("0", "1")) for n in names)
    entries = []
    for a0, a1 in itertools.product((0, 1), repeat=2):
        row = (str(a0), str(a1), str(a0 ^ a1))
        if decoy:
            entries += [(row + ("0",), 1 / 8), (row + ("1",), 1 / 8)]
        else:
            entries.append((row, 1 / 4))
    dist = TabularDistribution(schema, entries)
    fns = [FunctionDef.projection("p0", "a0", schema), FunctionDef.projection("p1", "a1", schema)]
    if decoy:
        fns.append(FunctionDef.projection("decoy", "d", schema))
    return ProxyInstance(schema, dist, tuple(fns), "a2", alpha, name="xor")


def copy_instance(alpha=0.0):
    """a1 is a copy of uniform a0; one projection of a0."""
    schema, dist = binary_table(["a0", "a1"], lambda a0: a0)
    return ProxyInstance(schema, dist, (FunctionDef.projection("p0", "a0", schema),), "a1", alpha, name="copy")


def biased_instance(p=0.25):
    schema = AttributeSchema.from_pairs([("a", ("0", "1")), ("b", ("0", "1"))])
    dist = ProductDistribution(schema, {"a": [1 - p, p], "b": [0.5, 0.5]})
    return ProxyInstance(schema, dist, (FunctionDef.projection("pb", "b", schema),), "a", 0.0, name="biased")
