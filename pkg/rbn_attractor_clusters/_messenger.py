# Copyright (C) 2026 The rbn-attractor-clusters authors
# Licensed under GPL v3 or later

import sys

import colorama

_INFO_COLOR = colorama.Fore.WHITE + colorama.Style.BRIGHT
_ERROR_COLOR = colorama.Fore.RED + colorama.Style.BRIGHT
_PROGRESS_COLOR = colorama.Fore.CYAN
_QUESTION_COLOR = colorama.Fore.GREEN + colorama.Style.BRIGHT
_RESET_COLOR = colorama.Style.RESET_ALL


class Messenger:
    def __init__(self, colorize, verbose=False):
        self._colorize = colorize
        self._verbose = verbose

        # Multi-line block of text should by separated from consecutive output (if any)
        # by a blank line to give it some "air".  This flag is a tiny state machine.
        self._air_needed = False

    @property
    def verbose(self):
        return self._verbose

    def produce_air(self):
        if self._air_needed:
            print()
            self._air_needed = False

    def request_air(self, future_message):
        if "\n" in future_message:
            self._air_needed = True

    def _produce_and_request_air(self, future_message):
        self.produce_air()
        self.request_air(future_message)

    def _colored(self, color, message):
        if self._colorize:
            return f"{color}{message}{_RESET_COLOR}"
        return message

    def tell_info(self, message):
        self._produce_and_request_air(message)
        print(self._colored(_INFO_COLOR, message))

    def tell_progress(self, message):
        if not self._verbose:
            return
        self._produce_and_request_air(message)
        print(self._colored(_PROGRESS_COLOR, message), file=sys.stderr)

    def tell_error(self, message):
        self._produce_and_request_air(message)
        print(self._colored(_ERROR_COLOR, f"Error: {message}"), file=sys.stderr)

    def format_question(self, message):
        return self._colored(_QUESTION_COLOR, message)
