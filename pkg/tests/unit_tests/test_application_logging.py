import os.path
from logging import getLogger
from uuid import uuid4

import pytest

from wiener_convex import EXPERIMENTS_DIR, LOG_FILE_PATH, PACKAGE_DATA_DIR


@pytest.mark.unit_test
def test_log_file_location():
    """
    Tests the application log file.

    Asserts the log file exists in the app log directory, then writes a unique entry and reads it back from the
    last line of the file, parsing the ``::`` separated format.
    """
    _LOGGER = getLogger(__name__)

    assert os.path.isfile(LOG_FILE_PATH)

    expected_msg = f"level set extracted {uuid4()}"
    _LOGGER.info(expected_msg)

    with open(LOG_FILE_PATH, "r") as log_file:
        last_log = log_file.read().splitlines()[-1]

    fields = last_log.split("::")
    assert fields[1] == "INFO"
    assert fields[3] == "test_log_file_location"
    assert fields[-1] == expected_msg


@pytest.mark.unit_test
def test_app_directories_exist():
    """Test the experiments root and the packaged experiment configs are in place."""
    assert EXPERIMENTS_DIR.is_dir()
    assert (PACKAGE_DATA_DIR / "logging_config.yaml").is_file()
    assert (PACKAGE_DATA_DIR / "experiments" / "solve_quadratic.yaml").is_file()
