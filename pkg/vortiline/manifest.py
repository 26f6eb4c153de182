# vortiline -- https://github.com/vortiline/vortiline
#
# Copyright (C) 2025 The vortiline developers
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.


"""Run manifests: what produced an output directory and how to check it."""

import hashlib
import json
import logging
import os

import attr

from .constants import MANIFEST_FILE, VERSION

logger = logging.getLogger(__name__)


def sha256_file(path, chunk_size=1 << 20):
    digest = hashlib.sha256()
    with open(path, 'rb') as fh:
        for chunk in iter(lambda: fh.read(chunk_size), b''):
            digest.update(chunk)
    return digest.hexdigest()


@attr.s
class RunManifest(object):
    """Manifest written next to every set of outputs.

    Times are simulation times; nothing wall-clock related is stored so
    that identical inputs give byte-identical manifests.
    """

    command = attr.ib()
    config_text = attr.ib(default='')
    version = attr.ib(default=VERSION)
    model = attr.ib(default=None)
    t_start = attr.ib(default=0.0)
    t_end = attr.ib(default=None)
    status = attr.ib(default='running')
    error = attr.ib(default=None)
    steps = attr.ib(default=0)
    cfl_violations = attr.ib(factory=list)
    snapshots = attr.ib(factory=list)
    flags = attr.ib(factory=dict)
    windows = attr.ib(factory=list)
    notes = attr.ib(factory=list)
    files = attr.ib(factory=dict)

    def add_snapshot(self, name, time):
        self.snapshots.append({'file': name, 'time': float(time)})

    def note(self, message):
        logger.info('%s', message)
        self.notes.append(message)

    def checksum(self, directory, names):
        for name in names:
            path = os.path.join(directory, name)
            if os.path.isfile(path):
                self.files[name] = sha256_file(path)

    def to_dict(self):
        return attr.asdict(self, recurse=True)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + '\n'

    def write(self, directory, outputs=()):
        """Checksum ``outputs`` (names relative to ``directory``) and write ``manifest.json``."""
        self.checksum(directory, outputs)
        path = os.path.join(directory, MANIFEST_FILE)
        with open(path, 'w', encoding='utf-8') as fh:
            fh.write(self.to_json())
        return path


def read_manifest(path):
    with open(path, encoding='utf-8') as fh:
        data = json.load(fh)
    return RunManifest(**data)


def verify_manifest(directory):
    """Names of listed files whose checksum no longer matches (missing files included)."""
    manifest = read_manifest(os.path.join(directory, MANIFEST_FILE))
    bad = []
    for name, digest in sorted(manifest.files.items()):
        path = os.path.join(directory, name)
        if not os.path.isfile(path) or sha256_file(path) != digest:
            bad.append(name)
    return bad
