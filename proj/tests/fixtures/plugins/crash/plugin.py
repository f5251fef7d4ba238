#!/usr/bin/env python3
# Copyright 2026 The Bento Authors
# SPDX-License-Identifier: Apache-2.0

"""Crash fixture: run fails in the way the `how` parameter asks for."""

import json
import os
import signal
import sys


def main():
    with open(sys.argv[1]) as f:
        control = json.load(f)
    if control["phase"] != "run":
        return 0
    how = control["params"]["how"]
    if how == "signal":
        sys.stderr.write("about to crash\n")
        sys.stderr.flush()
        os.kill(os.getpid(), signal.SIGSEGV)
    if how == "exit":
        sys.stderr.write("giving up\n")
        return 3
    with open(control["output_path"], "w") as f:
        if how == "garbage":
            f.write("this is not json\n")
        elif how == "ok":
            f.write(json.dumps({"metric": "value", "value": 1, "unit": "x"}) + "\n")
    if how == "silent":
        os.remove(control["output_path"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
