# Copyright (C) 2026 The rbn-attractor-clusters authors
# Licensed under GPL v3 or later


class Confirmation:
    _CONFIRM_GOOD = ("y", "Y", "yes")
    _CONFIRM_BAD = ("", "n", "N", "no")
    _CONFIRM_KNOWN = _CONFIRM_GOOD + _CONFIRM_BAD

    def __init__(self, messenger, ask):
        self._messenger = messenger
        self._ask = ask

    def confirmed(self, question):
        """
        Ask a yes/no question, "no" being the default; always "yes" when not asking.
        """
        if not self._ask:
            return True

        *context, last_line = question.split("\n")
        if context:
            self._messenger.tell_info("\n".join(context).rstrip("\n"))
        prompt = self._messenger.format_question(last_line)

        self._messenger.produce_air()

        while True:
            try:
                reply = input(f"{prompt} [y/N] ")
            except EOFError:
                reply = ""
            if reply.strip() in self._CONFIRM_KNOWN:
                break

        self._messenger.request_air(question)

        return reply.strip() in self._CONFIRM_GOOD
