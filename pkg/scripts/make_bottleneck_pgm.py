"""Regenerate src/nhastar/data/bottleneck.pgm from the ASCII drawing below.

'#' building (gray 40), '+' shadowed wall (gray 110), '.' road (gray 235),
',' faded road marking (gray 180).  With the default 0.5 threshold the first
two are obstacles and the last two are free.
"""

from pathlib import Path

ART = r"""
##############################
#............#########.......#
#............#########.......#
#...,........#########..,....#
#....####....#########.......#
#....####.....................
#....####.....,...............
#....####.....................
#....####....#########.......#
#............#########.......#
#............#########.......#
#............#########.......#
######..##++##########.......#
######..##############.......#
######..##############.......#
#.........................####
#.......,.................####
#.........................####
#.........................####
#....####++#####.........#####
#....###########.........#####
#....###########.........#####
#....###########.........#####
#....###########.........#####
#...........................##
#.........,.................##
#...........................##
#...........................##
#...........................##
##############################
"""

GRAY = {"#": 40, "+": 110, ".": 235, ",": 180}


def rows():
    return ART.strip().splitlines()


def render() -> bytes:
    lines = rows()
    out = ["P2", "# bottleneck road network, row 0 = north edge", f"{len(lines[0])} {len(lines)}", "255"]
    out += [" ".join(str(GRAY[c]) for c in line) for line in lines]
    return ("\n".join(out) + "\n").encode()


if __name__ == "__main__":
    dest = Path(__file__).resolve().parents[1] / "src" / "nhastar" / "data" / "bottleneck.pgm"
    dest.write_bytes(render())
    print(f"wrote {dest}")
