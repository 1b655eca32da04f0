"""Braid words in B_n: construction, composition, reduction and the permutation map.

Letters are stored as ``(index, sign)`` pairs and written in files as signed
integers (``k`` for sigma_k, ``-k`` for its inverse). Words are never
normalised implicitly; ``free_reduce`` is the only cancelling operation.
"""

from dataclasses import dataclass

from src.errors import IndexOutOfRange, InvalidPair, MalformedInput, StrandCountMismatch, UnsupportedStrandCount


@dataclass(frozen=True)
class BraidWord:
    """A word in the Artin generators of B_n."""

    strand_count: int
    letters: tuple = ()

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return format_word(self)

    @property
    def signed(self):
        """Return the letters in signed-integer form."""
        return tuple(index * sign for index, sign in self.letters)


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1..n}; ``images[k]`` is the label found at position k+1."""

    images: tuple

    def __str__(self):
        return "(" + ",".join(str(i) for i in self.images) + ")"

    @property
    def is_identity(self):
        return all(image == position for position, image in enumerate(self.images, 1))


def _letter(value, n):
    """Convert a signed integer or an (index, sign) pair to a checked letter."""
    if isinstance(value, tuple):
        index, sign = value
    else:
        if isinstance(value, bool) or not isinstance(value, int):
            raise MalformedInput(f"Braid letter must be an integer, got {value!r}")
        index, sign = abs(value), (1 if value > 0 else -1)
    if sign not in (1, -1):
        raise MalformedInput(f"Braid letter sign must be +1 or -1, got {sign!r}")
    if not 1 <= index <= n - 1:
        raise IndexOutOfRange(f"Generator sigma_{index} does not exist in B_{n} (valid: 1..{n - 1})")
    return index, sign


def make_word(n, letters=()):
    """Build a braid word on n strands from signed indices."""
    if n < 2:
        raise UnsupportedStrandCount(f"A braid group needs at least 2 strands, got {n}")
    return BraidWord(n, tuple(_letter(value, n) for value in letters))


def identity_word(n):
    """Return the empty word on n strands."""
    return make_word(n, ())


def sigma(index, n, sign=1):
    """Return the one-letter word sigma_index^sign."""
    return make_word(n, [(index, sign)])


def _check_same_strands(words):
    counts = {w.strand_count for w in words}
    if len(counts) > 1:
        raise StrandCountMismatch(f"Cannot combine braid words on {sorted(counts)} strands")


def compose(first, *rest):
    """Stack braid words in order: the result is their concatenation."""
    words = (first, *rest)
    _check_same_strands(words)
    letters = tuple(letter for w in words for letter in w.letters)
    return BraidWord(first.strand_count, letters)


def inverse(word):
    """Return the group inverse: letters reversed with signs flipped."""
    return BraidWord(word.strand_count, tuple((index, -sign) for index, sign in reversed(word.letters)))


def power(word, k):
    """Return the k-fold product of a word with itself (negative k inverts)."""
    base = word if k >= 0 else inverse(word)
    return BraidWord(word.strand_count, base.letters * abs(k))


def conjugate(g, word):
    """Return g * word * g^-1."""
    return compose(g, word, inverse(g))


def free_reduce(word):
    """Cancel adjacent inverse pairs until none remain; the braid relation is not used."""
    stack = []
    for index, sign in word.letters:
        if stack and stack[-1] == (index, -sign):
            stack.pop()
        else:
            stack.append((index, sign))
    return BraidWord(word.strand_count, tuple(stack))


def exponent_sum(word):
    """Return the signed letter count (the abelianisation B_n -> Z)."""
    return sum(sign for _, sign in word.letters)


def permutation_of(word):
    """Apply the letters left to right as adjacent transpositions of (1..n)."""
    images = list(range(1, word.strand_count + 1))
    for index, _ in word.letters:
        images[index - 1], images[index] = images[index], images[index - 1]
    return Permutation(tuple(images))


def parity(perm):
    """Return 0 for an even permutation and 1 for an odd one."""
    images = perm.images
    inversions = sum(1 for a in range(len(images)) for b in range(a + 1, len(images)) if images[a] > images[b])
    return inversions % 2


def is_pure(word):
    return permutation_of(word).is_identity


def band_word(i, j, n):
    """Return (sigma_{j-1}..sigma_{i+1}) sigma_i^2 (sigma_{i+1}^-1..sigma_{j-1}^-1)."""
    descending = list(range(j - 1, i, -1))
    letters = descending + [i, i] + [-k for k in reversed(descending)]
    return make_word(n, letters)


def pure_generator(i, j, n):
    """Return the pure braid generator a_ij twisting strands i and j."""
    if not 1 <= i < j <= n:
        raise InvalidPair(f"Pure generator needs 1 <= i < j <= n, got i={i}, j={j}, n={n}")
    if n == 3:
        # a_12 = s1^2, a_13 = s2 s1^2 s2^-1, a_23 = s2^2
        table = {(1, 2): [1, 1], (1, 3): [2, 1, 1, -2], (2, 3): [2, 2]}
        return make_word(3, table[(i, j)])
    return band_word(i, j, n)


def parse_word(text, n):
    """Parse whitespace-separated signed integers into a braid word."""
    letters = []
    for token in text.replace(",", " ").split():
        try:
            value = int(token)
        except ValueError as e:
            raise MalformedInput(f"Invalid braid letter {token!r}: expected a signed integer") from e
        if value == 0:
            raise MalformedInput("Braid letter 0 is not a generator")
        letters.append(value)
    return make_word(n, letters)


def format_word(word):
    """Format a braid word as whitespace-separated signed integers."""
    return " ".join(str(value) for value in word.signed)


def word_to_json(word):
    return {"n": word.strand_count, "word": list(word.signed)}


def word_from_json(obj):
    """Build a braid word from its ``{"n": ..., "word": [...]}`` form."""
    if not isinstance(obj, dict) or "n" not in obj or "word" not in obj:
        raise MalformedInput('Braid word JSON must look like {"n": 3, "word": [1, 2]}')
    if isinstance(obj["n"], bool) or not isinstance(obj["n"], int):
        raise MalformedInput("Braid word JSON field 'n' must be an integer")
    if not isinstance(obj["word"], list):
        raise MalformedInput("Braid word JSON field 'word' must be a list")
    if 0 in obj["word"]:
        raise MalformedInput("Braid letter 0 is not a generator")
    return make_word(obj["n"], obj["word"])
