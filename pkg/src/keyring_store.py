"""Thin wrapper around the system keyring for the sealing keys.

Every blinded bits file is encrypted with its own key, stored under the
same service name with the username ``seal.<key id>``. Keys stored in this
process stay readable here even when no keyring backend is available.
"""

import logging
from typing import Dict

try:
    import keyring  # type: ignore

    KEYRING_AVAILABLE = True
except ImportError:
    KEYRING_AVAILABLE = False

SERVICE = "nlqm-sim"

# Keyring username prefix of the sealing keys
KEY_SEAL_PREFIX = "seal."

_session: Dict[str, str] = {}


def seal_key_name(key_id: str) -> str:
    return f"{KEY_SEAL_PREFIX}{key_id}"


def get_secret(key: str) -> str:
    """Retrieve a secret from this process or the system keyring.

    Returns:
        The stored value, or empty string if not found.
    """
    if key in _session:
        return _session[key]
    if not KEYRING_AVAILABLE:
        return ""
    try:
        value = keyring.get_password(SERVICE, key)
        return value or ""
    except Exception as e:
        logging.debug("keyring get failed for %s: %s", key, e)
        return ""


def set_secret(key: str, value: str) -> bool:
    """Store a secret in the system keyring.

    Returns:
        True if the keyring holds it, False if only this process does.
    """
    _session[key] = value
    if not KEYRING_AVAILABLE:
        return False
    try:
        keyring.set_password(SERVICE, key, value)
        return True
    except Exception as e:
        logging.warning("keyring set failed for %s: %s", key, e)
        return False


def delete_secret(key: str) -> bool:
    """Remove a secret from this process and the system keyring.

    Returns:
        True if the keyring entry was removed, False otherwise.
    """
    _session.pop(key, None)
    if not KEYRING_AVAILABLE:
        return False
    try:
        keyring.delete_password(SERVICE, key)
        return True
    except Exception as e:
        logging.debug("keyring delete failed for %s: %s", key, e)
        return False
