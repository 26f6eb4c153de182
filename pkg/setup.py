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

from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

with open("requirements.txt", "r", encoding="utf-8") as fh:
    install_requires = fh.read().splitlines()

setup(
    name="vortiline",
    python_requires='>=3.10',
    version="0.1.0",
    author="The vortiline developers",
    description="Vortex-line growth diagnostics for SQG and 3D Euler flows",
    long_description=long_description,
    long_description_content_type="text/markdown",
    url="https://github.com/vortiline/vortiline",
    packages=find_packages(include=['vortiline', 'vortiline.*']),
    install_requires=install_requires,
    entry_points={'console_scripts': ['vortiline = vortiline.cli:main']},
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: GNU General Public License v3 or later (GPLv3+)",
        "Operating System :: OS Independent"])
