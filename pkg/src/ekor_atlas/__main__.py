from ekor_atlas.cli import run

if __name__ == "__main__":
    run()
