import csv
import json
import os
import sys

# Default location for command outputs, next to this file like the config
DATA_DIR = os.path.join(os.path.dirname(__file__), 'data')
CONFIG_FILE = os.path.join(os.path.dirname(__file__), 'config.json')

CSV_DIGITS = 15


def load_config(file_path=CONFIG_FILE):
    """Loads config.json; a missing or corrupted file yields an empty dict."""
    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except (FileNotFoundError, json.JSONDecodeError) as e:
        print(f"⚠️ Could not read {file_path} ({e}); using built-in defaults.", file=sys.stderr)
        return {}


def output_path(directory, filename):
    """Joins directory/filename, creating the directory on first use."""
    directory = directory or DATA_DIR
    if not os.path.exists(directory):
        os.makedirs(directory)
    return os.path.join(directory, filename)


def save_json(file_path, data):
    with open(file_path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(data, f, indent=4)
        f.write('\n')


def format_number(value, digits=CSV_DIGITS):
    # '.' decimal regardless of locale, fixed significant digits
    if isinstance(value, bool) or isinstance(value, int):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return value


def save_csv(file_path, fieldnames, rows, digits=CSV_DIGITS):
    with open(file_path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames, lineterminator='\n')
        writer.writeheader()
        for row in rows:
            writer.writerow({key: format_number(row[key], digits) for key in fieldnames})


def load_csv(file_path):
    with open(file_path, 'r', encoding='utf-8', newline='') as f:
        return list(csv.DictReader(f))


def target_path(output, directory, default_name):
    """An explicit --output wins; otherwise default_name inside the output directory."""
    if output:
        parent = os.path.dirname(output)
        if parent and not os.path.exists(parent):
            os.makedirs(parent)
        return output
    return output_path(directory, default_name)
