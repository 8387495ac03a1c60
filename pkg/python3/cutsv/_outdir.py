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



import os
import stat
import robust_layer.simple_fops
from ._errors import OutputDirError


class OutputDir:
    """
    This class manipulates the output directory of a study.
    """

    def __init__(self, path):
        assert path is not None

        self._MODE = 0o40755
        self._path = path

    @property
    def path(self):
        return self._path

    def initialize(self):
        if not os.path.exists(self._path):
            os.makedirs(self._path, mode=self._MODE & 0o777)
        else:
            self._verifyDir()
            robust_layer.simple_fops.truncate_dir(self._path)

    def get_file_path(self, record_name):
        return os.path.join(self._path, record_name)

    def save_record(self, record_name, value):
        fullfn = os.path.join(self._path, record_name)
        with open(fullfn, "w") as f:
            f.write(value)

    def _verifyDir(self):
        # output directory can be a directory or directory symlink
        # so here we use os.stat() instead of os.lstat()
        s = os.stat(self._path)
        if not stat.S_ISDIR(s.st_mode):
            raise OutputDirError("\"%s\" is not a directory" % (self._path))
        if s.st_uid != os.getuid():
            raise OutputDirError("invalid uid for \"%s\"" % (self._path))
        if not os.access(self._path, os.W_OK):
            raise OutputDirError("\"%s\" is not writable" % (self._path))
