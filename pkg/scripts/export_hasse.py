"""Write Bruhat order diagrams of admissible sets as graphviz files."""

import argparse
import pathlib

from ekor_atlas.cli import main as cli_main


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-g", type=int, default=3)
    parser.add_argument("--level", default="iwahori")
    parser.add_argument("--out-dir", default="hasse")
    args = parser.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for g in range(1, args.max_g + 1):
        target = out / f"adm_g{g}_{args.level.replace(',', '_')}.dot"
        code = cli_main(["classify", "--g", str(g), "--level", args.level,
                         "--format", "dot", "--out", str(target)])
        if code != 0:
            raise SystemExit(code)
        print(f"wrote {target}")


if __name__ == "__main__":
    main()
