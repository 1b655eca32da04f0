"""Flips, the subgroup R they generate, and the quotient B_3/R.

The flip r_i carries strand i once around all the other strands. For every n
it is written as (s_{i-1}..s_1)(s_1..s_{n-1})(s_{n-1}..s_i), which for n = 3
gives r_1 = s1 s2^2 s1, r_2 = s1^2 s2^2 and r_3 = s2 s1^2 s2.

Classes of B_3/R are decided by the pair (permutation, exponent sum mod 4).
Both parts are well defined on the quotient: flips are pure, and every flip
and every conjugate of one has exponent sum 4. The pair is also complete.
P_3 is generated by s1^2, s2^2 and s2 s1^2 s2^-1, and modulo R each of them
equals s1^2 while s1^4 lies in R, so P_3/R has at most two elements. s1^2 has
exponent sum 2, so it is not in R and P_3/R has order exactly two. If two words
share the pair, w1 w2^-1 is pure with exponent sum 0 mod 4. It is then not
s1^2 in P_3/R, so it lies in R and the words are equal modulo R.

Equality modulo R is also witnessed constructively: a certificate is a list of
elementary moves that rewrites one word into the other and can be replayed
letter by letter.
"""

import functools
import itertools
from dataclasses import dataclass, field
from enum import Enum

from src.artin_oracle import equal_in_group
from src.braid_core import (
    BraidWord,
    Permutation,
    compose,
    conjugate,
    exponent_sum,
    identity_word,
    inverse,
    make_word,
    parity,
    permutation_of,
    power,
    pure_generator,
    sigma,
    word_from_json,
    word_to_json,
)
from src.errors import (
    InvalidCertificate,
    InvalidClass,
    InvalidIndex,
    MalformedInput,
    NotPure,
    StrandCountMismatch,
    UnsupportedStrandCount,
)

FREE_INSERT = "FreeInsert"
FREE_CANCEL = "FreeCancel"
ARTIN_REPLACE = "ArtinReplace"
FLIP_INSERT = "FlipInsert"
FLIP_DELETE = "FlipDelete"
MOVE_OPS = (FREE_INSERT, FREE_CANCEL, ARTIN_REPLACE, FLIP_INSERT, FLIP_DELETE)

LEFT_TO_RIGHT = "LtoR"
RIGHT_TO_LEFT = "RtoL"

# canonical representatives are enumerated with this letter order
LETTER_ORDER = (1, -1, 2, -2)


class HomotopyClass(Enum):
    """The two homotopy classes of closed paths in SO(3), as the group Z_2."""

    TRIVIAL = "trivial"
    NONTRIVIAL = "nontrivial"

    def __add__(self, other):
        return HomotopyClass.from_parity(int(self is HomotopyClass.NONTRIVIAL) + int(other is HomotopyClass.NONTRIVIAL))

    @classmethod
    def from_parity(cls, k):
        return cls.NONTRIVIAL if k % 2 else cls.TRIVIAL


@dataclass(frozen=True)
class SphereBraidClass:
    """An element of B_3/R: the permutation and the exponent sum mod 4."""

    perm: Permutation
    esum_mod4: int

    def __str__(self):
        return f"({self.perm}, {self.esum_mod4})"

    def to_json(self):
        return {"perm": list(self.perm.images), "esum_mod4": self.esum_mod4}


@dataclass(frozen=True)
class SearchBudget:
    """Limits for certificate searches."""

    max_states: int = 2_000_000
    length_slack: int = 8
    quick_depth: int = 4


@dataclass(frozen=True)
class Move:
    """One elementary rewriting move on a braid word.

    ``index``/``sign`` name the inserted letter pair for FreeInsert and the
    flip r_index^sign for FlipInsert/FlipDelete.
    """

    op: str
    pos: int
    index: int = None
    sign: int = None
    direction: str = None

    def to_json(self):
        out = {"op": self.op, "pos": self.pos}
        if self.op == ARTIN_REPLACE:
            out["dir"] = self.direction
        elif self.op == FREE_INSERT:
            out["index"] = self.index
            out["sign"] = self.sign
        elif self.op in (FLIP_INSERT, FLIP_DELETE):
            out["flip"] = self.index
            out["sign"] = self.sign
        return out


@dataclass(frozen=True)
class Certificate:
    """A replayable proof that ``start`` and ``end`` are equal modulo R."""

    start: BraidWord
    moves: tuple
    end: BraidWord

    def __len__(self):
        return len(self.moves)


@dataclass(frozen=True)
class Inconclusive:
    """The search budget ran out, or the words are provably in different classes."""

    reason: str
    states: int = 0


# ---------------------------------------------------------------------------
# flips, full twist, classes
# ---------------------------------------------------------------------------


def flip_general(i, n):
    """Return r_i = (s_{i-1} .. s_1)(s_1 .. s_{n-1})(s_{n-1} .. s_i), valid for every 1 <= i <= n."""
    if n < 3 or not 1 <= i <= n:
        raise InvalidIndex(f"Flip r_{i} needs n >= 3 and 1 <= i <= n, got n={n}")
    to_left = list(range(i - 1, 0, -1))
    across = list(range(1, n))
    back = list(range(n - 1, i - 1, -1))
    return make_word(n, to_left + across + back)


@functools.lru_cache(maxsize=None)
def flip(i, n):
    """Return the flip word r_i in B_n."""
    if n < 3 or not 1 <= i <= n:
        raise InvalidIndex(f"Flip r_{i} needs n >= 3 and 1 <= i <= n, got n={n}")
    up = list(range(1, n))
    down = list(range(n - 1, 0, -1))
    if i == 1:
        return make_word(n, up + down)
    if i == n:
        return make_word(n, down + up)
    return make_word(n, list(range(i - 1, 0, -1)) + up + list(range(n - 1, i - 1, -1)))


def full_twist(n):
    """Return d = (s_{n-1} .. s_2 s_1)^n."""
    return power(make_word(n, list(range(n - 1, 0, -1))), n)


def _require_three_strands(word):
    if word.strand_count != 3:
        raise UnsupportedStrandCount(f"B_3/R classes need 3 strands, got {word.strand_count}")


def sphere_class(word):
    """Return the complete invariant of a word in B_3/R."""
    _require_three_strands(word)
    return SphereBraidClass(permutation_of(word), exponent_sum(word) % 4)


def z2_class(word):
    """Return the Z_2 class of a pure three-strand braid modulo R."""
    _require_three_strands(word)
    if not permutation_of(word).is_identity:
        raise NotPure(f"Word {word} permutes its strands: {permutation_of(word)}")
    return HomotopyClass.TRIVIAL if exponent_sum(word) % 4 == 0 else HomotopyClass.NONTRIVIAL


def _words_of_length(length):
    for letters in itertools.product(LETTER_ORDER, repeat=length):
        yield make_word(3, letters)


@functools.lru_cache(maxsize=None)
def _canonical_table():
    table = {}
    for length in range(0, 4):
        for word in _words_of_length(length):
            table.setdefault(sphere_class(word), word)
    return table


def canonical_rep(cls):
    """Return the first shortest word (in LETTER_ORDER) of a B_3/R class."""
    images = tuple(cls.perm.images)
    if sorted(images) != [1, 2, 3] or cls.esum_mod4 not in (0, 1, 2, 3):
        raise InvalidClass(f"Not a B_3/R class: {cls}")
    if parity(cls.perm) != cls.esum_mod4 % 2:
        raise InvalidClass(f"Class {cls} violates parity(perm) = esum mod 2")
    return _canonical_table()[cls]


# ---------------------------------------------------------------------------
# identity tables
# ---------------------------------------------------------------------------


def _s(index, sign=1, n=3):
    return sigma(index, n, sign)


def lemma1_table():
    """The conjugation table showing R is normal in B_3 (ten entries)."""
    r1, r2, r3 = flip(1, 3), flip(2, 3), flip(3, 3)
    s1, s2, s1i, s2i = _s(1), _s(2), _s(1, -1), _s(2, -1)
    return [
        ("s1 r1 s1^-1 = r2", [conjugate(s1, r1), r2]),
        ("s2 r1 s2^-1 = s2^-1 r1 s2 = r1", [conjugate(s2, r1), conjugate(s2i, r1), r1]),
        ("s1 r2 s1^-1 = r2 r1 r2^-1", [conjugate(s1, r2), conjugate(r2, r1)]),
        ("s2 r2 s2^-1 = r3", [conjugate(s2, r2), r3]),
        ("s1 r3 s1^-1 = s1^-1 r3 s1 = r3", [conjugate(s1, r3), conjugate(s1i, r3), r3]),
        ("s2 r3 s2^-1 = r1^-1 r2 r1 = r3 r2 r3^-1", [conjugate(s2, r3), conjugate(inverse(r1), r2), conjugate(r3, r2)]),
        ("s1^-1 r1 s1 = r1^-1 r2 r1", [conjugate(s1i, r1), conjugate(inverse(r1), r2)]),
        ("s1^-1 r2 s1 = r1", [conjugate(s1i, r2), r1]),
        ("s2^-1 r2 s2 = r1 r3 r1^-1 = r2^-1 r3 r2",
         [conjugate(s2i, r2), conjugate(r1, r3), conjugate(inverse(r2), r3)]),
        ("s2^-1 r3 s2 = r2", [conjugate(s2i, r3), r2]),
    ]


def lemma1_general_table(n):
    """The five conjugation families showing R is normal in B_n."""
    r = {i: flip(i, n) for i in range(1, n + 1)}
    entries = []
    for i in range(1, n + 1):
        for j in range(1, n):
            if i - j > 1 or j - i > 0:
                label = f"s{j} r{i} s{j}^-1 = s{j}^-1 r{i} s{j} = r{i}"
                entries.append((label, [conjugate(_s(j, 1, n), r[i]), conjugate(_s(j, -1, n), r[i]), r[i]]))
    for i in range(2, n + 1):
        label = f"s{i - 1} r{i} s{i - 1}^-1 = r{i} r{i - 1} r{i}^-1"
        entries.append((label, [conjugate(_s(i - 1, 1, n), r[i]), conjugate(r[i], r[i - 1])]))
    for i in range(2, n + 1):
        label = f"s{i - 1}^-1 r{i} s{i - 1} = r{i - 1}"
        entries.append((label, [conjugate(_s(i - 1, -1, n), r[i]), r[i - 1]]))
    for i in range(1, n - 1):
        label = f"s{i} r{i} s{i}^-1 = r{i + 1}"
        entries.append((label, [conjugate(_s(i, 1, n), r[i]), r[i + 1]]))
    for i in range(1, n - 1):
        label = f"s{i}^-1 r{i} s{i} = r{i}^-1 r{i + 1} r{i}"
        entries.append((label, [conjugate(_s(i, -1, n), r[i]), conjugate(inverse(r[i]), r[i + 1])]))
    return entries


def _check_entries(entries):
    results = []
    for label, words in entries:
        verified = all(equal_in_group(words[0], other) for other in words[1:])
        results.append({"identity": label, "words": [str(w) for w in words], "verified": verified})
    return results


def verify_lemma1(n=3, general=None):
    """Check every conjugation identity of the normality lemma with the Artin oracle.

    For n = 3 the ten-entry table is used unless ``general`` is set; otherwise
    the five families are instantiated for every valid index.
    """
    if not 3 <= n <= 7:
        raise UnsupportedStrandCount(f"Normality check supports 3 <= n <= 7, got {n}")
    if general is None:
        general = n != 3
    entries = lemma1_general_table(n) if general else lemma1_table()
    results = _check_entries(entries)
    passed = sum(1 for r in results if r["verified"])
    return {
        "target": "lemma1p" if general else "lemma1",
        "n": n,
        "identities": results,
        "passed": passed,
        "total": len(results),
        "ok": passed == len(results),
    }


def verify_flip_formulas():
    """Check the n = 3 flips and the band form of a_13 against their displayed words."""
    expected = {1: [1, 2, 2, 1], 2: [1, 1, 2, 2], 3: [2, 1, 1, 2]}
    checks = [
        {"identity": f"r{i} = {' '.join(map(str, letters))}", "verified": list(flip(i, 3).signed) == letters}
        for i, letters in expected.items()
    ]
    checks.append(
        {
            "identity": "r_i = (s_{i-1} .. s1)(s1 .. s_{n-1})(s_{n-1} .. s_i) for n = 3..7",
            "verified": all(flip_general(i, n) == flip(i, n) for n in range(3, 8) for i in range(1, n + 1)),
        }
    )
    a13 = pure_generator(1, 3, 3)
    checks.append(
        {
            "identity": "a13 = s2 s1^2 s2^-1 = s1^-1 s2^2 s1",
            "verified": equal_in_group(a13, make_word(3, [-1, 2, 2, 1])),
        }
    )
    return checks


def verify_full_twist_factorisation():
    """Check d = a12 a13 a23 in B_3."""
    product = compose(pure_generator(1, 2, 3), pure_generator(1, 3, 3), pure_generator(2, 3, 3))
    return equal_in_group(full_twist(3), product)


def verify_single_generator():
    """Check that r2 and r3 are conjugates of r1 in B_3."""
    r1, r2, r3 = flip(1, 3), flip(2, 3), flip(3, 3)
    return equal_in_group(conjugate(_s(1), r1), r2) and equal_in_group(conjugate(compose(_s(2), _s(1)), r1), r3)


# ---------------------------------------------------------------------------
# moves and certificates
# ---------------------------------------------------------------------------


def _flip_letters(i, sign, n):
    word = flip(i, n)
    return word.letters if sign > 0 else inverse(word).letters


def _artin_direction(triple):
    """Return the direction of an Artin replacement on a triple, or None if it is not one."""
    (i, s), (j, t), (k, u) = triple
    if not (s == t == u and i == k and abs(i - j) == 1):
        return None
    return LEFT_TO_RIGHT if i < j else RIGHT_TO_LEFT


def _apply(letters, move, n):
    """Apply a move to a tuple of letters, raising InvalidCertificate if it is illegal."""
    pos = move.pos
    if move.op not in MOVE_OPS:
        raise InvalidCertificate(f"Unknown move {move.op!r}")
    if not isinstance(pos, int) or pos < 0 or pos > len(letters):
        raise InvalidCertificate(f"{move.op} position {pos} outside word of length {len(letters)}")
    if move.op == FREE_INSERT:
        if move.index is None or not 1 <= move.index <= n - 1 or move.sign not in (1, -1):
            raise InvalidCertificate(f"FreeInsert needs a generator and a sign, got {move}")
        pair = ((move.index, move.sign), (move.index, -move.sign))
        return letters[:pos] + pair + letters[pos:]
    if move.op == FREE_CANCEL:
        if pos + 2 > len(letters) or letters[pos] != (letters[pos + 1][0], -letters[pos + 1][1]):
            raise InvalidCertificate(f"FreeCancel at {pos}: no inverse pair")
        return letters[:pos] + letters[pos + 2 :]
    if move.op == ARTIN_REPLACE:
        triple = letters[pos : pos + 3]
        if len(triple) != 3 or _artin_direction(triple) is None:
            raise InvalidCertificate(f"ArtinReplace at {pos}: no braid relation triple")
        if _artin_direction(triple) != move.direction:
            raise InvalidCertificate(f"ArtinReplace at {pos}: direction {move.direction} does not match the word")
        (i, s), (j, _), _ = triple
        return letters[:pos] + ((j, s), (i, s), (j, s)) + letters[pos + 3 :]
    if move.index is None or not 1 <= move.index <= n or move.sign not in (1, -1):
        raise InvalidCertificate(f"{move.op} needs a flip index and a sign, got {move}")
    relator = _flip_letters(move.index, move.sign, n)
    if move.op == FLIP_INSERT:
        return letters[:pos] + relator + letters[pos:]
    if letters[pos : pos + len(relator)] != relator:
        raise InvalidCertificate(f"FlipDelete at {pos}: r{move.index}^{move.sign} not found")
    return letters[:pos] + letters[pos + len(relator) :]


def apply_move(word, move):
    """Return the word obtained by one elementary move."""
    return BraidWord(word.strand_count, _apply(word.letters, move, word.strand_count))


def replay(certificate):
    """Replay a certificate move by move and return the list of intermediate words."""
    n = certificate.start.strand_count
    if certificate.end.strand_count != n:
        raise StrandCountMismatch("Certificate start and end have different strand counts")
    letters = certificate.start.letters
    trail = [letters]
    for move in certificate.moves:
        letters = _apply(letters, move, n)
        trail.append(letters)
    if letters != certificate.end.letters:
        raise InvalidCertificate(f"Replay ends at {BraidWord(n, letters)}, expected {certificate.end}")
    return [BraidWord(n, step) for step in trail]


def _inverse_move(move, before):
    if move.op == FREE_INSERT:
        return Move(FREE_CANCEL, move.pos)
    if move.op == FREE_CANCEL:
        index, sign = before[move.pos]
        return Move(FREE_INSERT, move.pos, index, sign)
    if move.op == ARTIN_REPLACE:
        flipped = RIGHT_TO_LEFT if move.direction == LEFT_TO_RIGHT else LEFT_TO_RIGHT
        return Move(ARTIN_REPLACE, move.pos, direction=flipped)
    op = FLIP_DELETE if move.op == FLIP_INSERT else FLIP_INSERT
    return Move(op, move.pos, move.index, move.sign)


def invert_certificate(certificate):
    """Return the certificate running from ``end`` back to ``start``."""
    trail = replay(certificate)
    moves = tuple(_inverse_move(move, trail[k].letters) for k, move in reversed(list(enumerate(certificate.moves))))
    return Certificate(certificate.end, moves, certificate.start)


def concat_certificates(first, second):
    if first.end != second.start:
        raise InvalidCertificate(f"Cannot chain certificates: {first.end} != {second.start}")
    return Certificate(first.start, first.moves + second.moves, second.end)


def shift_moves(moves, offset):
    """Shift move positions so a certificate for u -> v proves x u y -> x v y with |x| = offset."""
    return tuple(Move(m.op, m.pos + offset, m.index, m.sign, m.direction) for m in moves)


def certificate_to_json(certificate):
    return {
        "start": word_to_json(certificate.start),
        "moves": [m.to_json() for m in certificate.moves],
        "end": word_to_json(certificate.end),
    }


def _move_from_json(obj):
    if not isinstance(obj, dict) or obj.get("op") not in MOVE_OPS or "pos" not in obj:
        raise MalformedInput(f"Invalid certificate move: {obj!r}")
    op = obj["op"]
    if op == ARTIN_REPLACE:
        return Move(op, obj["pos"], direction=obj.get("dir"))
    if op == FREE_INSERT:
        return Move(op, obj["pos"], obj.get("index"), obj.get("sign"))
    if op in (FLIP_INSERT, FLIP_DELETE):
        return Move(op, obj["pos"], obj.get("flip"), obj.get("sign"))
    return Move(op, obj["pos"])


def certificate_from_json(obj):
    """Load a certificate; ``end`` defaults to the replayed word when absent."""
    if not isinstance(obj, dict) or "start" not in obj or not isinstance(obj.get("moves"), list):
        raise MalformedInput('Certificate JSON must look like {"start": {...}, "moves": [...]}')
    start = word_from_json(obj["start"])
    moves = tuple(_move_from_json(m) for m in obj["moves"])
    if "end" in obj:
        end = word_from_json(obj["end"])
    else:
        letters = start.letters
        for move in moves:
            letters = _apply(letters, move, start.strand_count)
        end = BraidWord(start.strand_count, letters)
    return Certificate(start, moves, end)


# ---------------------------------------------------------------------------
# rewriting to normal form in B_3/R
# ---------------------------------------------------------------------------

A = (1, 1)
B = (2, 1)


class _BudgetExhausted(Exception):
    pass


@dataclass
class _Scribe:
    """Applies moves to a working word and records them, within a budget."""

    letters: tuple
    n: int
    max_length: int
    max_states: int
    moves: list = field(default_factory=list)

    def apply(self, move):
        if len(self.moves) >= self.max_states:
            raise _BudgetExhausted(f"state budget of {self.max_states} moves exhausted")
        self.letters = _apply(self.letters, move, self.n)
        if len(self.letters) > self.max_length:
            raise _BudgetExhausted(f"word length {len(self.letters)} exceeds limit {self.max_length}")
        self.moves.append(move)

    def free_insert(self, pos, index, sign):
        self.apply(Move(FREE_INSERT, pos, index, sign))

    def free_cancel(self, pos):
        self.apply(Move(FREE_CANCEL, pos))

    def artin(self, pos):
        self.apply(Move(ARTIN_REPLACE, pos, direction=_artin_direction(self.letters[pos : pos + 3])))

    def flip_insert(self, pos, i, sign=1):
        self.apply(Move(FLIP_INSERT, pos, i, sign))

    def flip_delete(self, pos, i, sign=1):
        self.apply(Move(FLIP_DELETE, pos, i, sign))


# a = s1, b = s2. Each macro rewrites the subword starting at p and holds at
# most one inserted flip at a time.


def _aa_to_bb(scribe, p):
    """aa -> a r3 a = (aba)(aba) -> (bab)(bab) = b r1 b -> bb."""
    scribe.flip_insert(p + 1, 3)
    scribe.artin(p)
    scribe.artin(p + 3)
    scribe.flip_delete(p + 1, 1)


def _bb_to_aa(scribe, p):
    """bb -> b r1 b = (bab)(bab) -> (aba)(aba) = a r3 a -> aa."""
    scribe.flip_insert(p + 1, 1)
    scribe.artin(p)
    scribe.artin(p + 3)
    scribe.flip_delete(p + 1, 3)


def _delete_a4(scribe, p):
    """aaaa -> aabb = r2 -> empty."""
    _aa_to_bb(scribe, p + 2)
    scribe.flip_delete(p, 2)


def _baa_to_aab(scribe, p):
    """baa -> b^-1 -> aab using r3 and r2."""
    scribe.free_insert(p + 3, 2, 1)
    scribe.flip_delete(p, 3)
    scribe.flip_insert(p, 2)
    scribe.free_cancel(p + 3)


def _raise_negative(scribe, p):
    """a^-1 -> bba -> aaa through r1, b^-1 -> aab -> bbb through r3."""
    index, _ = scribe.letters[p]
    if index == 1:
        scribe.flip_insert(p + 1, 1)
        scribe.free_cancel(p)
        _bb_to_aa(scribe, p)
    else:
        scribe.flip_insert(p + 1, 3)
        scribe.free_cancel(p)
        _aa_to_bb(scribe, p)


# rules in priority order: the length-decreasing one first
_RULES = (
    ((A, A, A, A), _delete_a4),
    ((B, B), _bb_to_aa),
    ((B, A, B), lambda scribe, p: scribe.artin(p)),
    ((B, A, A), _baa_to_aab),
)


def _find_redex(letters, end):
    for pattern, macro in _RULES:
        width = len(pattern)
        for p in range(0, end - width + 1):
            if letters[p : p + width] == pattern:
                return p, macro, width
    return None


def _rewrite_prefix(scribe, end):
    """Rewrite letters[:end] (all positive) until no rule applies; return the new prefix length."""
    while True:
        found = _find_redex(scribe.letters, end)
        if found is None:
            return end
        p, macro, width = found
        before = len(scribe.letters)
        macro(scribe, p)
        end += len(scribe.letters) - before


def _normal_form_moves(word, max_length, max_states):
    scribe = _Scribe(word.letters, 3, max_length, max_states)
    k = 0
    while k < len(scribe.letters):
        _, sign = scribe.letters[k]
        if sign < 0:
            _raise_negative(scribe, k)
            end = k + 3
        else:
            end = k + 1
        k = _rewrite_prefix(scribe, end)
    return Certificate(word, tuple(scribe.moves), BraidWord(3, scribe.letters))


def mod_r_normal_form(word, budget=None):
    """Rewrite a B_3 word into its positive normal form a^k, a^k b or a^k b a (0 <= k <= 3).

    Letters are taken left to right and the prefix read so far is kept in
    normal form. That prefix is never more than two letters longer than the
    letters it came from, and no macro adds more than six letters to it, so
    every intermediate word stays within len(word) + 8.

    Returns the certificate from ``word`` to the normal form, or Inconclusive
    if the budget is exhausted.
    """
    _require_three_strands(word)
    budget = budget or SearchBudget()
    try:
        return _normal_form_moves(word, len(word) + budget.length_slack, budget.max_states)
    except _BudgetExhausted as e:
        return Inconclusive(str(e))


# ---------------------------------------------------------------------------
# certificate search
# ---------------------------------------------------------------------------


def _word_key(letters):
    return len(letters), tuple(i * s for i, s in letters)


def _shrinking_moves(letters, n, flips):
    """Moves that delete letters or apply the braid relation, with their results."""
    found = []
    for p in range(len(letters) - 1):
        if letters[p] == (letters[p + 1][0], -letters[p + 1][1]):
            found.append((Move(FREE_CANCEL, p), letters[:p] + letters[p + 2 :]))
    for (i, sign), relator in flips.items():
        width = len(relator)
        for p in range(len(letters) - width + 1):
            if letters[p : p + width] == relator:
                found.append((Move(FLIP_DELETE, p, i, sign), letters[:p] + letters[p + width :]))
    for p in range(len(letters) - 2):
        direction = _artin_direction(letters[p : p + 3])
        if direction is not None:
            move = Move(ARTIN_REPLACE, p, direction=direction)
            found.append((move, _apply(letters, move, n)))
    found.sort(key=lambda item: _word_key(item[1]))
    return found


def _growing_moves(letters, n, flips, max_length):
    """FreeInsert and FlipInsert moves that keep the word within max_length."""
    found = []
    if len(letters) + 2 <= max_length:
        for p in range(len(letters) + 1):
            for index in range(1, n):
                for sign in (1, -1):
                    pair = ((index, sign), (index, -sign))
                    found.append((Move(FREE_INSERT, p, index, sign), letters[:p] + pair + letters[p:]))
    for (i, sign), relator in flips.items():
        if len(letters) + len(relator) > max_length:
            continue
        for p in range(len(letters) + 1):
            found.append((Move(FLIP_INSERT, p, i, sign), letters[:p] + relator + letters[p:]))
    found.sort(key=lambda item: _word_key(item[1]))
    return found


def _deepening_search(start, target, depth_limit, max_states, expand, shortest_step):
    """Iterative deepening from start to target; returns (moves or None, states explored).

    ``expand`` lists (move, result) pairs in the order they are tried and
    ``shortest_step`` bounds how much one move can shorten a word. Raises
    _BudgetExhausted once more than max_states results have been generated.
    """
    states = 0

    def dfs(letters, depth, path, seen):
        nonlocal states
        if letters == target:
            return list(path)
        if depth == 0 or len(letters) - shortest_step * depth > len(target):
            return None
        for move, result in expand(letters):
            states += 1
            if states > max_states:
                raise _BudgetExhausted(f"state budget of {max_states} exhausted")
            if seen.get(result, -1) >= depth - 1:
                continue
            seen[result] = depth - 1
            path.append(move)
            found = dfs(result, depth - 1, path, seen)
            path.pop()
            if found is not None:
                return found
        return None

    for depth in itertools.count() if depth_limit is None else range(depth_limit + 1):
        found = dfs(start, depth, [], {start: depth})
        if found is not None:
            return found, states
    return None, states


def _flip_relators(n):
    return {(i, sign): _flip_letters(i, sign, n) for i in range(1, n + 1) for sign in (1, -1)}


def _quick_search(start, target, n, depth_limit, max_states):
    """Deleting and Artin moves only, to a fixed depth."""
    flips = _flip_relators(n)

    def expand(letters):
        if len(letters) < len(target):
            return []
        return _shrinking_moves(letters, n, flips)

    return _deepening_search(start, target, depth_limit, max_states, expand, 2 * n - 2)


def _full_search(start, target, n, max_length, max_states):
    """Every elementary move within max_length, deepening until the budget runs out."""
    flips = _flip_relators(n)

    def expand(letters):
        return _shrinking_moves(letters, n, flips) + _growing_moves(letters, n, flips, max_length)

    return _deepening_search(start, target, None, max_states, expand, 2 * n - 2)


def _class_obstruction(w1, w2):
    """Return a reason the words cannot be equal modulo R, or None."""
    n = w1.strand_count
    if permutation_of(w1) != permutation_of(w2):
        return f"permutations differ: {permutation_of(w1)} != {permutation_of(w2)}"
    modulus = 4 if n == 3 else 2 * n - 2
    if (exponent_sum(w1) - exponent_sum(w2)) % modulus:
        return f"exponent sums differ modulo {modulus}: {exponent_sum(w1)} vs {exponent_sum(w2)}"
    return None


def certify_equal_mod_R(w1, w2, budget=None):
    """Search for a certificate that w1 and w2 are equal in B_n/R.

    A short iterative-deepening search over deleting and Artin moves runs
    first. For three strands the normal-form rewriting then decides every
    remaining case; for more strands the deepening continues over every
    elementary move, shrinking moves first, until the state budget runs out.
    No intermediate word is longer than the longer input plus length_slack.
    Inconclusive never means the words are different unless its reason says so.
    """
    if w1.strand_count != w2.strand_count:
        raise StrandCountMismatch(f"Cannot compare words on {w1.strand_count} and {w2.strand_count} strands")
    n = w1.strand_count
    if n < 3:
        raise UnsupportedStrandCount(f"Flips need at least 3 strands, got {n}")
    budget = budget or SearchBudget()
    obstruction = _class_obstruction(w1, w2)
    if obstruction:
        return Inconclusive(f"different classes modulo R ({obstruction})")

    try:
        moves, states = _quick_search(w1.letters, w2.letters, n, budget.quick_depth, budget.max_states)
    except _BudgetExhausted as e:
        return Inconclusive(str(e), budget.max_states)
    if moves is not None:
        certificate = Certificate(w1, tuple(moves), w2)
        replay(certificate)
        return certificate

    max_length = max(len(w1), len(w2)) + budget.length_slack
    remaining = budget.max_states - states
    if n != 3:
        try:
            moves, _ = _full_search(w1.letters, w2.letters, n, max_length, remaining)
        except _BudgetExhausted as e:
            return Inconclusive(str(e), budget.max_states)
        certificate = Certificate(w1, tuple(moves), w2)
        replay(certificate)
        return certificate

    try:
        to_normal = _normal_form_moves(w1, max_length, remaining)
        from_normal = _normal_form_moves(w2, max_length, remaining - len(to_normal))
    except _BudgetExhausted as e:
        return Inconclusive(str(e), budget.max_states)
    if to_normal.end != from_normal.end:
        return Inconclusive(f"normal forms differ: {to_normal.end} vs {from_normal.end}")
    certificate = concat_certificates(to_normal, invert_certificate(from_normal))
    replay(certificate)
    return certificate


def certify_in_R(word, budget=None):
    """Search for a certificate that a word lies in R."""
    return certify_equal_mod_R(word, identity_word(word.strand_count), budget)


# ---------------------------------------------------------------------------
# verification suites built on certificates
# ---------------------------------------------------------------------------


def _certificate_entry(label, w1, w2, budget):
    result = certify_equal_mod_R(w1, w2, budget)
    entry = {"identity": label, "start": str(w1), "end": str(w2)}
    if isinstance(result, Certificate):
        entry.update({"status": "certified", "moves": len(result), "verified": True})
    else:
        entry.update({"status": "inconclusive", "reason": result.reason, "verified": False})
    return entry


def verify_prop1(budget=None):
    """Certify the identity chain showing P_3/R has order two."""
    w = functools.partial(make_word, 3)
    pairs = [
        ("s1 s2^2 = s1^-1", w([1, 2, 2]), w([-1])),
        ("s1^-1 = s2^2 s1", w([-1]), w([2, 2, 1])),
        ("s2 s1^2 = s2^-1", w([2, 1, 1]), w([-2])),
        ("s2^-1 = s1^2 s2", w([-2]), w([1, 1, 2])),
        ("s1^4 = I", w([1, 1, 1, 1]), w([])),
        ("s2^4 = I", w([2, 2, 2, 2]), w([])),
        ("s1^2 = s1^-2", w([1, 1]), w([-1, -1])),
        ("s1^-2 = s2^2", w([-1, -1]), w([2, 2])),
        ("s2^2 = s2^-2", w([2, 2]), w([-2, -2])),
    ]
    results = [_certificate_entry(label, w1, w2, budget) for label, w1, w2 in pairs]
    nontrivial = sphere_class(w([1, 1])) != sphere_class(w([]))
    results.append({"identity": "s1^2 != I modulo R", "status": "invariant", "verified": nontrivial})
    passed = sum(1 for r in results if r["verified"])
    return {"target": "prop1", "n": 3, "identities": results, "passed": passed, "total": len(results),
            "ok": passed == len(results), "inconclusive": False}


def verify_prop1p(n=3, budget=None):
    """Certify d^2 in R for n = 3 (mandatory) or n = 4 (best effort)."""
    if n not in (3, 4):
        raise UnsupportedStrandCount(f"Full-twist check supports n = 3 or 4, got {n}")
    d = full_twist(n)
    entry = _certificate_entry("d^2 in R", power(d, 2), identity_word(n), budget)
    results = [entry]
    if n == 3:
        nontrivial = z2_class(d) is HomotopyClass.NONTRIVIAL
        results.append({"identity": "d not in R", "status": "invariant", "verified": nontrivial})
    passed = sum(1 for r in results if r["verified"])
    return {"target": "prop1p", "n": n, "identities": results, "passed": passed, "total": len(results),
            "ok": passed == len(results), "inconclusive": entry["status"] == "inconclusive"}
