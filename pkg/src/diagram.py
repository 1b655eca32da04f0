"""Static braid diagrams: plain text and SVG.

A positive letter sigma_i has the left strand passing behind, so the strand
moving from position i+1 to position i is drawn on top.
"""

SVG_SPACING = 40
SVG_GAP = 0.18


def _strand_row(n, fill, crossing_at=None, glyph=""):
    cells = []
    position = 1
    while position <= n:
        if position == crossing_at:
            cells.append(glyph)
            position += 2
        else:
            cells.append(fill)
            position += 1
    return " ".join(cells)


def render_ascii(word):
    """Draw the word top to bottom, three text rows per letter.

    The middle row shows only the over-strand: ``/`` for a positive letter and
    ``\\`` for a negative one.
    """
    n = word.strand_count
    lines = [" ".join(str(k) for k in range(1, n + 1))]
    if not word.letters:
        lines.append(_strand_row(n, "|"))
    for index, sign in word.letters:
        lines.append(_strand_row(n, "|", index, "\\ /"))
        lines.append(_strand_row(n, "|", index, " / " if sign > 0 else " \\ "))
        lines.append(_strand_row(n, "|", index, "/ \\"))
    return "\n".join(lines) + "\n"


def _line(x1, y1, x2, y2):
    return f'<line x1="{x1:g}" y1="{y1:g}" x2="{x2:g}" y2="{y2:g}" />'


def render_svg(word):
    """Draw the word bottom to top as an SVG document, leaving a gap in every under-strand."""
    n = word.strand_count
    width = SVG_SPACING * (n + 1)
    height = SVG_SPACING * (len(word) + 1)

    def x(position):
        return SVG_SPACING * position

    def y(level):
        return height - SVG_SPACING / 2 - SVG_SPACING * level

    shapes = []
    if not word.letters:
        shapes.extend(_line(x(p), y(0), x(p), SVG_SPACING / 2) for p in range(1, n + 1))
    for level, (index, sign) in enumerate(word.letters):
        bottom, top = y(level), y(level + 1)
        for p in range(1, n + 1):
            if p not in (index, index + 1):
                shapes.append(_line(x(p), bottom, x(p), top))
        # the left strand moves right, the right strand moves left
        rightward = (x(index), bottom, x(index + 1), top)
        leftward = (x(index + 1), bottom, x(index), top)
        over, under = (leftward, rightward) if sign > 0 else (rightward, leftward)
        shapes.append(_line(*over))
        x1, y1, x2, y2 = under
        cut = (1 - SVG_GAP) / 2
        shapes.append(_line(x1, y1, x1 + (x2 - x1) * cut, y1 + (y2 - y1) * cut))
        shapes.append(_line(x2 - (x2 - x1) * cut, y2 - (y2 - y1) * cut, x2, y2))
    body = "\n  ".join(shapes)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'<g stroke="black" stroke-width="3" stroke-linecap="round">\n  {body}\n</g>\n</svg>\n'
    )
