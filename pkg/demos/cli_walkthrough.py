"""Drive the command line tool end to end from a temporary directory.

Writes three factor files, certifies them, then regenerates a table row.
Equivalent shell commands are printed before each step.
"""

import json
import tempfile
from pathlib import Path

from cpdunique import catalog, io
from cpdunique.cli import main as cli


def run(*args):
    print("$ cpdunique " + " ".join(args))
    code = cli(list(args))
    print(f"(exit {code})\n")
    return code


def main():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        paths = []
        for role, M in zip("ABC", catalog.two_of_three()):
            p = tmp / f"{role}.txt"
            io.write_matrix(p, M, role)
            paths.append(str(p))
        print(Path(paths[0]).read_text())

        cert = tmp / "cert.json"
        run("check", *paths, "--out", str(cert))
        doc = json.loads(cert.read_text())
        print("certificate fired:", doc["certificate"]["fired"], "\n")

        run("generic", "--dims", "5", "5", "9", "--max-rank")
        run("generic", "--dims", "4", "4", "8", "--rank", "9")
        run("tables", "--which", "3", "--range", "I=4..5", "--range", "K=6..9")
        run("examples", "--only", "two_k")


if __name__ == "__main__":
    main()
