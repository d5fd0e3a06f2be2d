"""
Check that the git tag matches the current kinkpairs version.

For use in CD when auto-releasing to PyPI.
"""

import os
import re
import sys
from pathlib import Path

BASE_DIR = Path(__file__).parents[1]

VERSION_PATTERN = re.compile(r"^__version__ = ['\"]([^'\"]*)['\"]", re.M)
MANIFEST_PATTERN = re.compile(r"^version = ['\"]([^'\"]*)['\"]", re.M)


def find_version(pattern: "re.Pattern[str]", *file_paths: str) -> str:
    """
    Find the formatted version declared in a file.

    :param pattern: regex whose first group is the version.
    :param file_paths: File path to search in.
    :returns: Formatted version, e.g. v1.0.0.
    :raises RuntimeError: Unable to find version string.
    """
    version_file = BASE_DIR.joinpath(*file_paths).read_text()
    version_match = pattern.search(version_file)
    if version_match:
        return f"v{version_match.group(1)}"
    raise RuntimeError(f"Unable to find version string in {'/'.join(file_paths)}.")


def run() -> None:
    """Check the git tag, the package version and the manifest version agree."""
    tag_ref = os.getenv("GITHUB_REF") or "ENV NOT SET"

    tag_match = re.match(r"refs/tags/(.+)", tag_ref)

    if tag_match:
        tag, = tag_match.groups()
    else:
        sys.stderr.write(f"Git Ref {tag_ref} did not match expected format!\n")
        tag = "UNKNOWN"

    package = find_version(VERSION_PATTERN, "kinkpairs", "__init__.py")
    manifest = find_version(MANIFEST_PATTERN, "pyproject.toml")

    if package != manifest:
        sys.exit(f"kinkpairs version: {package} != pyproject.toml version: {manifest}")
    if tag != package:
        sys.exit(f"Git tag: {tag} != kinkpairs version: {package}")


if __name__ == "__main__":
    run()
