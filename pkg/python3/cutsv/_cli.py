#!/usr/bin/env python3

# Copyright (c) 2020-2021 Fpemud <fpemud@sina.com>
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN
# THE SOFTWARE.



import sys
import logging
import argparse
from ._errors import ConfigError, OutputDirError
from ._settings import parse_config
from ._outdir import OutputDir
from ._study import run_study


_LOG_LEVELS = [logging.WARNING, logging.INFO, logging.DEBUG]
_LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def build_parser():
    parser = argparse.ArgumentParser(prog="cutsv-study",
                                     description="Convergence study of the cut Scott-Vogelius Stokes discretization.")
    parser.add_argument("--config", help="study configuration file (key = value lines)")
    parser.add_argument("--h-list", dest="h_list", help="comma separated mesh sizes, halving, e.g. 0.2,0.1,0.05")
    parser.add_argument("--gamma", help="grad-div parameter, a number or c/h")
    parser.add_argument("--eta", help="Nitsche penalty parameter, a number or c/h")
    parser.add_argument("--series", help="comma separated gamma:eta pairs, or \"reference\"")
    parser.add_argument("--degree", help="velocity polynomial degree")
    parser.add_argument("--solver", choices=["direct", "minres"])
    parser.add_argument("--workers", help="number of mesh sizes computed in parallel")
    parser.add_argument("--export-matrices", dest="export_matrices", action="store_const", const="true")
    parser.add_argument("--out", dest="out_dir", help="output directory, truncated before the study")
    parser.add_argument("-v", "--verbose", dest="verbose_level", action="count", default=None,
                        help="more output, may be given twice")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)

    overrides = dict()
    for key in ["h_list", "gamma", "eta", "series", "degree", "solver", "workers", "export_matrices", "out_dir"]:
        if getattr(args, key) is not None:
            overrides[key] = getattr(args, key)
    if args.verbose_level is not None:
        overrides["verbose_level"] = str(min(args.verbose_level, 2))

    try:
        text = ""
        if args.config is not None:
            with open(args.config, "r") as f:
                text = f.read()
        config = parse_config(text, overrides)
    except (OSError, ConfigError) as e:
        print("cutsv-study: %s" % (e), file=sys.stderr)
        return 2

    root = logging.getLogger()
    root.setLevel(_LOG_LEVELS[config.verbose_level])
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(_LOG_FORMAT))
    root.addHandler(handler)

    try:
        outDir = OutputDir(config.out_dir)
        outDir.initialize()
    except (OSError, OutputDirError) as e:
        logging.getLogger(__name__).error("can not use output directory: %s", e)
        return 2

    fileHandler = logging.FileHandler(outDir.get_file_path("study.log"))
    fileHandler.setFormatter(logging.Formatter(_LOG_FORMAT))
    root.addHandler(fileHandler)
    try:
        result = run_study(config, outDir)
    finally:
        root.removeHandler(fileHandler)
        fileHandler.close()
        root.removeHandler(handler)

    return 0 if result.all_ok else 1
