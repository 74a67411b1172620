"""Regenerates the blocks check goldens from a standalone mt19937-64."""
import sys
from pathlib import Path

MASK = (1 << 64) - 1


class MT64:
    def __init__(self, seed):
        self.mt = [0] * 312
        self.mt[0] = seed & MASK
        for i in range(1, 312):
            self.mt[i] = (6364136223846793005 * (self.mt[i - 1] ^ (self.mt[i - 1] >> 62)) + i) & MASK
        self.idx = 312

    def next(self):
        if self.idx >= 312:
            for i in range(312):
                x = (self.mt[i] & 0xFFFFFFFF80000000) | (self.mt[(i + 1) % 312] & 0x7FFFFFFF)
                xa = x >> 1
                if x & 1:
                    xa ^= 0xB5026F5AA96619E9
                self.mt[i] = self.mt[(i + 156) % 312] ^ xa
            self.idx = 0
        y = self.mt[self.idx]
        self.idx += 1
        y ^= (y >> 29) & 0x5555555555555555
        y ^= (y << 17) & 0x71D67FFFEDA60000
        y ^= (y << 37) & 0xFFF7EEE000000000
        y ^= y >> 43
        return y & MASK

    def index(self, n):
        limit = MASK - MASK % n
        x = self.next()
        while x >= limit:
            x = self.next()
        return x % n

    def shuffle(self, items):
        for i in range(len(items), 1, -1):
            j = self.index(i)
            items[i - 1], items[j] = items[j], items[i - 1]


def initial_check(seed, stacks_n, blocks_n):
    rng = MT64(seed)
    palette = ["red", "blue", "green", "yellow", "orange", "purple", "white"]
    rng.shuffle(palette)
    blocks = palette[:blocks_n]
    stacks = [[] for _ in range(stacks_n)]
    for b in blocks[1:]:
        stacks[rng.index(stacks_n)].append(b)
    rendered = " ".join(f"{i + 1}: [{', '.join(s)}]" for i, s in enumerate(stacks))
    return f"Stacks: {rendered} Hand: [] Inventory: [{blocks[0]}]"


if __name__ == "__main__":
    assert MT64(5489).next() == 14514284786278117030  # reference value of std::mt19937_64
    out = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).parent)
    (out / "blocks_single_seed1_check.txt").write_text(initial_check(1, 3, 4) + "\n")
    (out / "blocks_multiple_seed1_check.txt").write_text(initial_check(1, 4, 7) + "\n")
