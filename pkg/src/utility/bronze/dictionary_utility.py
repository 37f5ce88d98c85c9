# -*- coding: utf-8 -*-
"""
****************************************************
*                     PQN MOO                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
import copy


def merge_data(base_data: dict, override_data: dict) -> dict:
    """
    Function for merging override values into a copy of base data. Nested dictionaries are merged
    recursively, None overrides are ignored.
    :param base_data: Base dictionary, left untouched.
    :param override_data: Dictionary with values taking precedence.
    :return: Merged dictionary.
    """
    merged = copy.deepcopy(base_data)
    for key, value in override_data.items():
        if value is None:
            continue
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_data(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def section(data: dict, name: str) -> dict:
    """
    Function for extracting a configuration section. Documents without sections are returned as is.
    :param data: Configuration document.
    :param name: Section name.
    :return: Section content.
    """
    if name in data and isinstance(data[name], dict):
        return dict(data[name])
    return {key: value for key, value in data.items() if not isinstance(value, dict)}
