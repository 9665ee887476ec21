//! Doc-test shim for the guide in `book/`.
