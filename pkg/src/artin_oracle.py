"""Word problem for B_n through the Artin action on the free group F_n.

sigma_i sends x_i to x_i x_{i+1} x_i^-1 and x_{i+1} to x_i, fixing the other
generators. The action is faithful, so two braid words are equal in B_n
exactly when their automorphisms agree on every generator.

Free words are tuples of ``(generator, sign)`` pairs and are kept freely
reduced after every substitution. Image lengths can grow quickly with the
word length; the oracle is meant for words up to roughly 64 letters.
"""

from dataclasses import dataclass

from src.braid_core import inverse
from src.errors import StrandCountMismatch


@dataclass(frozen=True)
class FreeWord:
    """A freely reduced word in the generators x_1..x_n."""

    letters: tuple = ()

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(f"x{g}" if s > 0 else f"x{g}^-1" for g, s in self.letters)


@dataclass(frozen=True)
class FreeAutomorphism:
    """Images of the free generators, together with the images of the inverse map."""

    rank: int
    images: tuple
    inverse_images: tuple

    def __str__(self):
        return ", ".join(f"x{k} -> {image}" for k, image in enumerate(self.images, 1))


def reduce_letters(letters):
    """Freely reduce a sequence of (generator, sign) pairs."""
    stack = []
    for g, s in letters:
        if stack and stack[-1] == (g, -s):
            stack.pop()
        else:
            stack.append((g, s))
    return tuple(stack)


def free_word(letters):
    """Build a reduced free word from signed integers or (generator, sign) pairs."""
    pairs = [(abs(v), 1 if v > 0 else -1) if isinstance(v, int) else v for v in letters]
    return FreeWord(reduce_letters(pairs))


def invert_free(word):
    return FreeWord(tuple((g, -s) for g, s in reversed(word.letters)))


def _generators(rank):
    return tuple(FreeWord(((k, 1),)) for k in range(1, rank + 1))


def identity_automorphism(rank):
    gens = _generators(rank)
    return FreeAutomorphism(rank, gens, gens)


def _substitute(images, word):
    """Replace every x_g in word by images[g-1] and reduce."""
    out = []
    for g, s in word.letters:
        image = images[g - 1].letters
        if s < 0:
            image = tuple((h, -t) for h, t in reversed(image))
        for letter in image:
            if out and out[-1] == (letter[0], -letter[1]):
                out.pop()
            else:
                out.append(letter)
    return FreeWord(tuple(out))


def apply_automorphism(phi, word):
    """Return phi(word), freely reduced."""
    return _substitute(phi.images, word)


def _letter_images(index, sign, rank):
    """Images of the generators under a single letter sigma_index^sign."""
    images = list(_generators(rank))
    i, j = index, index + 1
    if sign > 0:
        images[i - 1] = FreeWord(((i, 1), (j, 1), (i, -1)))
        images[j - 1] = FreeWord(((i, 1),))
    else:
        images[i - 1] = FreeWord(((j, 1),))
        images[j - 1] = FreeWord(((j, -1), (i, 1), (j, 1)))
    return tuple(images)


def follow(first, second):
    """Return the automorphism of the braid ``first`` stacked on ``second``.

    With this convention ``artin_action(compose(a, b)) == follow(artin_action(a), artin_action(b))``.
    """
    images = tuple(_substitute(first.images, image) for image in second.images)
    inverse_images = tuple(_substitute(second.inverse_images, image) for image in first.inverse_images)
    return FreeAutomorphism(first.rank, images, inverse_images)


def _forward_images(word):
    """Images of the generators under the action of a braid word, built letter by letter."""
    images = _generators(word.strand_count)
    for index, sign in word.letters:
        step = _letter_images(index, sign, word.strand_count)
        updated = list(images)
        # only x_index and x_{index+1} change under one letter
        for k in (index - 1, index):
            updated[k] = _substitute(images, step[k])
        images = tuple(updated)
    return images


def artin_action(word):
    """Return the automorphism of F_n induced by a braid word."""
    return FreeAutomorphism(word.strand_count, _forward_images(word), _forward_images(inverse(word)))


def inverse_action(word):
    """Return the automorphism of the inverse braid (the stored inverse images)."""
    phi = artin_action(word)
    return FreeAutomorphism(phi.rank, phi.inverse_images, phi.images)


def is_identity(phi):
    return phi.images == _generators(phi.rank)


def is_invertible(phi):
    """Check that the stored inverse images undo the forward images on every generator."""
    gens = _generators(phi.rank)
    there_and_back = tuple(_substitute(phi.images, image) for image in phi.inverse_images)
    back_and_there = tuple(_substitute(phi.inverse_images, image) for image in phi.images)
    return there_and_back == gens and back_and_there == gens


def equal_in_group(w1, w2):
    """Decide whether two braid words represent the same element of B_n."""
    if w1.strand_count != w2.strand_count:
        raise StrandCountMismatch(f"Cannot compare words on {w1.strand_count} and {w2.strand_count} strands")
    return _forward_images(w1) == _forward_images(w2)


def boundary_word(rank):
    """Return x_1 x_2 ... x_n."""
    return FreeWord(tuple((k, 1) for k in range(1, rank + 1)))


def preserves_boundary(phi):
    """Check that phi fixes the product x_1 x_2 ... x_n."""
    return apply_automorphism(phi, boundary_word(phi.rank)) == boundary_word(phi.rank)
