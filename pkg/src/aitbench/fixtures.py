"""A fixed, reproducible set of small table machines for tests and demos."""
from __future__ import annotations

import random

from .foundation import strings_upto
from .machine import TableMachine

THREE_QUARTERS = TableMachine({"0": ("", 1), "11": ("1", 2)}, name="three-quarters")

_OUTPUTS = list(strings_upto(3))


def _prefix_code(rng: random.Random, size: int, max_len: int) -> list[str]:
    leaves = [""]
    while len(leaves) < size + 1:
        splittable = [w for w in leaves if len(w) < max_len]
        if not splittable:
            break
        w = rng.choice(splittable)
        leaves.remove(w)
        leaves += [w + "0", w + "1"]
    # dropping at least one leaf keeps the halting probability below 1
    rng.shuffle(leaves)
    return sorted(leaves[:max(1, len(leaves) - 1 - rng.randrange(3))])


def random_table_machine(seed: int, size: int, max_len: int = 8) -> TableMachine | None:
    rng = random.Random(seed)
    programs = _prefix_code(rng, size, max_len)
    if len({len(p) for p in programs}) < 2:
        return None
    entries = {p: (rng.choice(_OUTPUTS), rng.randint(1, 30)) for p in programs}
    # make a longest program the unique slowest one
    longest = max(programs, key=lambda p: (len(p), p))
    slowest = max(t for _, t in entries.values())
    entries[longest] = (entries[longest][0], slowest + 1)
    return TableMachine(entries, name=f"random-{seed}")


def fixture_machines(count: int = 22) -> list[TableMachine]:
    machines = [THREE_QUARTERS]
    seed = 0
    while len(machines) < count:
        size = 3 + (7 * seed) % 58
        m = random_table_machine(seed, size)
        if m is not None:
            machines.append(m)
        seed += 1
    return machines
