"""Run the console examples from README.md and compare their output."""

import re
import subprocess
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
BLOCK = re.compile(r"```console\n(.*?)```", re.S)


def examples():
    text = (ROOT / "README.md").read_text()
    found = []
    for block in BLOCK.findall(text):
        cmd, out = None, []
        for line in block.splitlines():
            if line.startswith("$ "):
                if cmd is not None:
                    found.append((cmd, out))
                cmd, out = line[2:], []
            else:
                out.append(line)
        if cmd is not None:
            found.append((cmd, out))
    return found


EXAMPLES = examples()


def test_readme_has_examples():
    assert len(EXAMPLES) >= 10


@pytest.mark.parametrize("cmd,expected", EXAMPLES, ids=[c for c, _ in EXAMPLES])
def test_readme_example(cmd, expected):
    runner = f"{sys.executable} -m ggdp"
    shell = re.sub(r"(^|\|\s*)ggdp\b", lambda m: m.group(1) + runner, cmd)
    proc = subprocess.run(["bash", "-c", shell], cwd=ROOT, capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    got = [line.rstrip() for line in proc.stdout.rstrip("\n").splitlines()]
    assert got == [line.rstrip() for line in expected]
